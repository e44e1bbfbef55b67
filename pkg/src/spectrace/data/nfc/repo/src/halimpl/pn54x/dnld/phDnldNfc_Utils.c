/* Checksum helpers for download frames. */
#include "phDnldNfc.h"

/* Computes a 16-bit checksum. */
unsigned short phDnldNfc_Crc16(const unsigned char *p, int n)
{
    unsigned short c = 0xFFFF;
    while (n-- > 0) {
        c ^= *p++;
    }
    return c;
}
