/* Device manager action handlers. */
#include "nfc_api.h"

/* Dispatches one device manager action. */
int nfa_dm_act_dispatch(int evt)
{
    return evt;
}
