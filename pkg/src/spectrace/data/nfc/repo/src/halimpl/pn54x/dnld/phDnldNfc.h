/* Download interface. */
#ifndef PHDNLDNFC_H
#define PHDNLDNFC_H

typedef struct phDnldNfc_Section {
    unsigned int addr;
    unsigned int len;
} phDnldNfc_Section_t;

#endif
