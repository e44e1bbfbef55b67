/* Execution environment discovery and table management. */
#include "nfc_api.h"

#define NFA_EE_MAX_EE 4

/* Starts NFCEE discovery to enumerate every NFCEE. */
int nfa_ee_discover(void)
{
    return NFA_EE_MAX_EE;
}

/* Records one NFCEE discovery notification in the NFCEE table. */
int nfa_ee_record_ntf(int ee_handle)
{
    return ee_handle;
}
