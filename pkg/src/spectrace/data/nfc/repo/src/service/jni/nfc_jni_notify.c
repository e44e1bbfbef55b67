/* Java bridge callbacks. */
#include "nfc_service.h"

/*
 * Event names forwarded to the application:
 *   NCI interface up, NCI interface down, DH NFCC link lost,
 *   NFCEE logical connection created, RF interface activated,
 *   NFCC initialization done, NCI initialization retried.
 */
/* Posts an event to the Java side. */
void nfcJni_PostEvent(int event)
{
    (void)event;
}
