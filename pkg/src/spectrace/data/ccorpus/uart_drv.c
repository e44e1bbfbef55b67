/* UART driver implementation. */
#include "uart_drv.h"

static const unsigned int uart_timeout_ms = 50;
const char *const uart_name = "uart0";

/* Opens a port at the given base address. */
struct uart_port uart_open(unsigned int base)
{
    struct uart_port p = { base, UART_IDLE, 0, { 0 } };
    return p;
}

int uart_write(struct uart_port *p,
               const uart_word_t *buf, int n)
{
    int i;
    for (i = 0; i < n; i++) {
        UART_REG(p->base, 0) = buf[i];
    }
    return n;
}

static int uart_poll(struct uart_port *p)
{
    if (p->state == UART_FAULT) {
        p->errors++; /* { unbalanced in a comment */
        return -1;
    }
    return 0;
}

#define UART_MAX_RETRIES 3
#define UART_ENABLE(p) do { (p)->state = UART_BUSY; } while (0)

void uart_close(struct uart_port *p) { p->state = UART_IDLE; }

enum { UART_POLL_MS = 10 };

typedef int (*uart_cb_t)(struct uart_port *p);

void uart_reset(void)
{
    const char *msg = "reset {";
    (void)msg;
}
