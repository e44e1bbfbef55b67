/* NFC service initialization that opens the controller and brings up the NCI interface. */
#include "nfc_service.h"

static int g_service_state;

/* Initializes the NFC service and opens the NFCC through the HAL. */
int nfcService_Init(void)
{
    if (phNxpNciHal_open() != 0) {
        return -1;
    }
    g_service_state = 1;
    return 0;
}

/* Tears the service down. */
void nfcService_Deinit(void)
{
    phNxpNciHal_close();
    g_service_state = 0;
}

/* Reports whether the service is running. */
int nfcService_IsRunning(void)
{
    return g_service_state;
}
