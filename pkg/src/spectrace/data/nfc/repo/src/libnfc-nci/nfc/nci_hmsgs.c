/* Core reset and core init command builders. */
#include "nci_defs.h"

/* Builds and sends the core reset command. */
int nci_snd_core_reset(unsigned char reset_type)
{
    return NCI_MSG_CORE_RESET + reset_type;
}

/* Builds and sends the core initialization command after the reset response. */
int nci_snd_core_init(void)
{
    return NCI_MSG_CORE_INIT;
}
