class SpectraceError(Exception):
    pass


class EmptyDocument(SpectraceError, ValueError):
    """Markdown input contained no headings."""


class EmbeddingFailure(SpectraceError):
    pass


class RootNotFound(SpectraceError, FileNotFoundError):
    pass


class PermissionDenied(SpectraceError, PermissionError):
    pass


class MalformedTagLine(SpectraceError, ValueError):
    def __init__(self, lineno: int, reason: str):
        super().__init__(f"tags line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


class ProviderFailure(SpectraceError):
    pass


class AuthError(ProviderFailure):
    """Backend rejected credentials. Never retried."""


class UnparseableResponse(SpectraceError, ValueError):
    pass


class MissingGroundTruth(SpectraceError, KeyError):
    def __init__(self, section_id: str):
        super().__init__(section_id)
        self.section_id = section_id

    def __str__(self) -> str:
        return f"no ground truth entry for section {self.section_id!r}"


class EmptyIndex(SpectraceError, ValueError):
    pass


class ConfigError(SpectraceError, ValueError):
    pass
