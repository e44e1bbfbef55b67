/* Vendor extension hooks. */
#include "phNxpNciHal.h"

/* Handles vendor responses. */
int phNxpNciHal_process_ext_rsp(unsigned char *rsp, int len)
{
    /* runtime notification: NCI interface error, DH retry, NFCC reset,
     * NFCC initialization timeout, NCI interface re-initialization,
     * NFCEE logical connection closed, RF interface error,
     * NCI interface NFCC initialization NFCEE RF interface DH notification */
    return rsp != 0 && len > 0;
}

/* Sends a vendor command. */
int phNxpNciHal_send_ext_cmd(int len)
{
    return len;
}
