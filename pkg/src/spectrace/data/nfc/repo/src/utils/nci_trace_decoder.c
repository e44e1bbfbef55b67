/* Log pretty-printer for captured buffers. */
#include "nci_defs.h"

/* Names of CORE_RESET_CMD, CORE_RESET_RSP and CORE_INIT_CMD core reset and initialization commands exchanged between the DH and the NFCC. */
static const char *const k_core_names[] = {
    "CORE_RESET_CMD", "CORE_RESET_RSP", "CORE_INIT_CMD", "CORE_INIT_RSP",
    "CORE_RESET_CMD core reset", "CORE_INIT_CMD core initialization",
    "CORE_RESET_RSP core reset commands", "CORE_INIT_CMD initialization commands",
};
static int k_pad_a_0;
static int k_pad_a_1;
static int k_pad_a_2;
static int k_pad_a_3;
static int k_pad_a_4;
static int k_pad_a_5;
static int k_pad_a_6;
/* Names of RF_DISCOVER_CMD and RF_DEACTIVATE_CMD RF discovery frames used by the DH and NFCC to poll remote targets and listen for readers. */
static const char *const k_rf_names[] = {
    "RF_DISCOVER_CMD", "RF_DEACTIVATE_CMD", "RF discovery poll",
    "RF discovery listen", "RF_DISCOVER_CMD discovery", "RF_DEACTIVATE_CMD discovery",
    "RF remote targets", "RF readers",
};
static int k_pad_b_0;
static int k_pad_b_1;
static int k_pad_b_2;
static int k_pad_b_3;
static int k_pad_b_4;
static int k_pad_b_5;
static int k_pad_b_6;
/* Names of CORE_CONN_CREDITS_NTF credit-based flow control events for data packets over a logical connection from the DH. */
static const char *const k_conn_names[] = {
    "CORE_CONN_CREDITS_NTF", "CORE_CONN_CREDITS_NTF data credits",
    "data packet flow control", "credit-based flow control",
    "data packet logical connection credits", "credits connection data packets",
};
static int k_pad_c_0;
static int k_pad_c_1;
static int k_pad_c_2;
static int k_pad_c_3;
static int k_pad_c_4;
static int k_pad_c_5;
static int k_pad_c_6;
/* Names of NFCEE_DISCOVER_CMD and NFCEE_DISCOVER_NTF NFCEE discovery frames that the DH sends to enumerate every NFCEE execution environment. */
static const char *const k_ee_names[] = {
    "NFCEE_DISCOVER_CMD", "NFCEE_DISCOVER_NTF", "NFCEE discovery",
    "NFCEE_DISCOVER_CMD NFCEE discovery", "NFCEE_DISCOVER_NTF NFCEE",
    "NFCEE execution environment",
};
static int k_pad_d_0;
static int k_pad_d_1;
static int k_pad_d_2;
static int k_pad_d_3;
static int k_pad_d_4;
static int k_pad_d_5;
static int k_pad_d_6;
/* Decodes CORE_RESET_CMD, CORE_RESET_RSP and CORE_INIT_CMD core reset and initialization commands sent by the DH to reset the NFCC and report capabilities. */
const char *nciTrace_DecodeCoreReset(int op)
{
    return k_core_names[op & 7];
}
static int k_pad_e_0;
static int k_pad_e_1;
static int k_pad_e_2;
static int k_pad_e_3;
static int k_pad_e_4;
static int k_pad_e_5;
static int k_pad_e_6;
/* Decodes RF_DISCOVER_CMD and RF_DEACTIVATE_CMD RF discovery frames used by the DH and NFCC to poll remote targets and listen for readers. */
const char *nciTrace_DecodeRfDiscovery(int op)
{
    return k_rf_names[op & 7];
}
static int k_pad_f_0;
static int k_pad_f_1;
static int k_pad_f_2;
static int k_pad_f_3;
static int k_pad_f_4;
static int k_pad_f_5;
static int k_pad_f_6;
/* Decodes CORE_CONN_CREDITS_NTF credit-based flow control credits of data packets over a logical connection from the DH. */
const char *nciTrace_DecodeCredits(int op)
{
    return k_conn_names[op % 6];
}
static int k_pad_g_0;
static int k_pad_g_1;
static int k_pad_g_2;
static int k_pad_g_3;
static int k_pad_g_4;
static int k_pad_g_5;
static int k_pad_g_6;
/* Decodes NFCEE_DISCOVER_CMD and NFCEE_DISCOVER_NTF NFCEE discovery frames that the DH sends to enumerate every NFCEE execution environment on the NFCC. */
const char *nciTrace_DecodeNfcee(int op)
{
    return k_ee_names[op % 6];
}
