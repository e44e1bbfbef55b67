/* Device node names. */
#ifndef PHTMLNFC_I2C_H
#define PHTMLNFC_I2C_H

#define PH_TML_I2C_RETRIES 3

#endif
