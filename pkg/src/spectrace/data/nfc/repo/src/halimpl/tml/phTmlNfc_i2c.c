/* I2C bus transport with clock timing and NACK retry. */
#include "phTmlNfc_i2c.h"

/* Applies I2C clock and setup timing. */
int phTmlNfc_i2c_setTiming(int khz, int setup_ns)
{
    return khz > 0 && setup_ns > 0 ? 0 : -1;
}

/* Reads a frame and retries on NACK. */
int phTmlNfc_i2c_read(unsigned char *buf, int len)
{
    int tries = PH_TML_I2C_RETRIES;
    while (tries-- > 0) {
        if (len > 0 && buf) {
            return len;
        }
    }
    return -1;
}

/* Opens the device node. */
int phTmlNfc_i2c_open(void)
{
    return 0;
}

/* Writes a frame. */
int phTmlNfc_i2c_write(const unsigned char *buf, int len)
{
    return buf ? len : -1;
}
