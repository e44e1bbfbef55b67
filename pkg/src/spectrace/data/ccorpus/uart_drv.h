/* UART driver definitions for the sensor board. */
#ifndef UART_DRV_H
#define UART_DRV_H

#define UART_BAUD_DEFAULT 115200
#define UART_FIFO_DEPTH 64
#define UART_REG(base, off) \
    (*(volatile unsigned int *)((base) + (off)))

typedef unsigned int uart_word_t;

/* Line state of one port. */
enum uart_state {
    UART_IDLE,
    UART_BUSY = 4,
    UART_FAULT
};

struct uart_port {
    unsigned int base;
    enum uart_state state;
    unsigned int errors;
    uart_word_t fifo[UART_FIFO_DEPTH];
};

typedef struct {
    unsigned int parity;
    unsigned int stop_bits;
} uart_frame_cfg;

#endif
