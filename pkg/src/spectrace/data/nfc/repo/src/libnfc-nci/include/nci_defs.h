/* Message group and opcode identifiers. */
#ifndef NCI_DEFS_H
#define NCI_DEFS_H

#define NCI_GID_CORE 0x00
#define NCI_GID_RF_MANAGE 0x01
#define NCI_GID_EE_MANAGE 0x02
#define NCI_MSG_CORE_RESET 0x00
#define NCI_MSG_CORE_INIT 0x01

#endif
