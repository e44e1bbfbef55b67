/* Stack task entry. */
#include "nfc_api.h"

static tNFC_STATE nfc_state;

/* Runs the stack event loop once. */
void nfc_task_run_once(void)
{
    nfc_state = NFC_STATE_IDLE;
}
