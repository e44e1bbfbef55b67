"""Run every CLI stage against the bundled NFC fixture and print the comparison table.

    python3 walkthroughs/fixture_end_to_end.py [output_dir]
"""

import os
import sys
import tempfile
from contextlib import redirect_stdout
from io import StringIO
from pathlib import Path

from spectrace.cli import main

FIXTURE = Path(__file__).resolve().parents[1] / "src" / "spectrace" / "data" / "nfc"


def run(*argv):
    buf = StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    if code != 0:
        sys.exit(f"spectrace {' '.join(argv)} exited with {code}")
    return buf.getvalue().strip()


def main_walkthrough(out):
    os.environ["SPECTRACE_OUT"] = str(out)
    cfg = str(FIXTURE / "config.json")

    print(f"output directory: {out}\n")
    run("index", "--config", cfg, "--quiet")
    print("structure docs:", len(list((out / "structures").rglob("*.md"))))

    records = [run("map", "--config", cfg, "--quiet")]
    for method in ("grep", "hybrid"):
        records.append(run("baseline", "--config", cfg, "--method", method, "--quiet"))
    for r in records:
        print("run record:", Path(r).name)

    print()
    print(run("eval", *records, "--ground-truth", str(FIXTURE / "ground_truth.json"), "--quiet"))
    gap = next((out / "eval").glob("gap_report_*.md"))
    print()
    print(gap.read_text())


if __name__ == "__main__":
    if len(sys.argv) > 1:
        main_walkthrough(Path(sys.argv[1]).resolve())
    else:
        with tempfile.TemporaryDirectory() as tmp:
            main_walkthrough(Path(tmp))
