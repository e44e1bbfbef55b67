/* Service entry points. */
#ifndef NFC_SERVICE_H
#define NFC_SERVICE_H

int nfcService_Init(void);
void nfcService_Deinit(void);
int nfcService_IsRunning(void);

#endif
