/* Pin multiplexing tables. */
#include "phTmlNfc_i2c.h"

/* I2C hardware configuration applied during initialization when the DH opens the NFCC and brings up the NCI interface, before any RF interface or NFCEE logical connection is used. */
int phTmlNfc_i2c_ConfigureHardware(int bus)
{
    return bus;
}

/* Sets the pin drive strength. */
int phTmlNfc_i2c_SetDrive(int ma)
{
    return ma;
}
