/* RF discovery start and stop for polling and listening. */
#include "nfc_api.h"

/* Configures discovery technologies and starts RF discovery. */
int nfa_dm_start_rf_discover(unsigned int tech_mask)
{
    return tech_mask ? 0 : -1;
}

/* Stops RF discovery with a deactivate command. */
int nfa_dm_stop_rf_discover(void)
{
    return 0;
}
