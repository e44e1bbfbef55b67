/* HAL interface declarations. */
#ifndef PHNXPNCIHAL_H
#define PHNXPNCIHAL_H

#define NXP_HAL_MAX_FRAME 258

int phNxpNciHal_open(void);
int phNxpNciHal_close(void);

#endif
