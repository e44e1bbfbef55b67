/* HAL open sequence that powers the NFCC and starts the NCI interface for the DH. */
#include "phNxpNciHal.h"

static int hal_open_count;

/* Opens the HAL, powers the NFCC and initializes the NCI interface. */
int phNxpNciHal_open(void)
{
    hal_open_count++;
    return phTmlNfc_Init();
}

/* Closes the HAL. */
int phNxpNciHal_close(void)
{
    hal_open_count--;
    return 0;
}

/* Writes one frame to the controller. */
int phNxpNciHal_write(const unsigned char *buf, int len)
{
    return phTmlNfc_Write(buf, len);
}
