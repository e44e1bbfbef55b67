/* Data packet credits and flow control. */
#include "nfc_api.h"

/* Sends a data packet only when the connection has credits. */
int nfc_ncif_send_data(tNFC_CONN_CB *p_cb, int len)
{
    if (p_cb->num_buff == 0) {
        return -1;
    }
    p_cb->num_buff--;
    return len;
}

/* Adds credits reported for a connection. */
void nfc_ncif_proc_credits(tNFC_CONN_CB *p_cb, unsigned char credits)
{
    p_cb->num_buff += credits;
}
