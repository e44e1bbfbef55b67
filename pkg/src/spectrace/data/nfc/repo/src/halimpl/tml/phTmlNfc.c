/* Transport mapping layer frame queue. */
#include "phTmlNfc_i2c.h"

/* Starts the transport. */
int phTmlNfc_Init(void)
{
    return phTmlNfc_i2c_open();
}

/* Queues one frame for transmission. */
int phTmlNfc_Write(const unsigned char *buf, int len)
{
    return phTmlNfc_i2c_write(buf, len);
}
