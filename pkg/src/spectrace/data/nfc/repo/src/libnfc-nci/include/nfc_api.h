/* Public stack types. */
#ifndef NFC_API_H
#define NFC_API_H

typedef unsigned char tNFC_STATUS;

typedef enum {
    NFC_STATE_NONE,
    NFC_STATE_IDLE
} tNFC_STATE;

typedef struct {
    unsigned char conn_id;
    unsigned char num_buff;
} tNFC_CONN_CB;

#endif
