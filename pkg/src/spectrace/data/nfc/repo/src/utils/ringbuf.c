/* Ring buffer helpers. */

/* Returns the free space in a ring. */
int ringbuf_free(int head, int tail, int size)
{
    return (tail - head - 1 + size) % size;
}
