/* Straight-line VSC keystream kernels for throughput measurement.
 *
 * Compiled on demand by vsc.analysis.bench with the system C compiler at
 * -O3 and loaded via ctypes; each function runs nblocks block steps from
 * state[8] (updated in place) and writes the emitted X,Y,Z,W words to out.
 * Native uint32_t arithmetic wraps modulo 2^32, so the code is a literal
 * transcription of the round equations.
 */
#include <stdint.h>

#define MASK_CLEAR(S) (S - (S % 4u) + 1u)
#define MASK_AFFINE(S) (4u * S + 1u)

#define MULT_LAYER(MASK) \
    uint32_t a = MASK(A), b = MASK(B), c = MASK(C), d = MASK(D); \
    uint32_t x = MASK(X), y = MASK(Y), z = MASK(Z), w = MASK(W); \
    uint32_t Ap = A * (2u * A + y), Bp = B * (2u * B + x); \
    uint32_t Cp = C * (2u * C + z), Dp = D * (2u * D + w); \
    uint32_t Xp = X * (2u * X + c), Yp = Y * (2u * Y + d); \
    uint32_t Zp = Z * (2u * Z + a), Wp = W * (2u * W + b);

#define ROT_PLAIN() \
    A = (Ap << 5) ^ (Bp >> 27); B = (Bp << 5) ^ (Cp >> 27); \
    C = (Cp << 5) ^ (Dp >> 27); D = (Dp << 5) ^ (Xp >> 27); \
    X = (Xp << 5) ^ (Yp >> 27); Y = (Yp << 5) ^ (Zp >> 27); \
    Z = (Zp << 5) ^ (Wp >> 27); W = (Wp << 5) ^ (Ap >> 27);

#define ROT_D_TWIST() \
    A = (Ap << 5) ^ (Bp >> 27); B = (Bp << 5) ^ (Cp >> 27); \
    C = (Cp << 5) ^ (Dp >> 27); D = (Dp << 5) ^ ((Xp >> 27) << 1); \
    X = (Xp << 5) ^ (Yp >> 27); Y = (Yp << 5) ^ (Zp >> 27); \
    Z = (Zp << 5) ^ (Wp >> 27); W = (Wp << 5) ^ (Ap >> 27);

#define LOAD() \
    uint32_t A = s[0], B = s[1], C = s[2], D = s[3]; \
    uint32_t X = s[4], Y = s[5], Z = s[6], W = s[7];

#define STORE() \
    s[0] = A; s[1] = B; s[2] = C; s[3] = D; \
    s[4] = X; s[5] = Y; s[6] = Z; s[7] = W;

#define EMIT(i) \
    out[4 * i] = X; out[4 * i + 1] = Y; out[4 * i + 2] = Z; out[4 * i + 3] = W;

void vsc128_blocks(uint32_t *s, uint32_t *out, long nblocks) {
    LOAD()
    for (long i = 0; i < nblocks; i++) {
        for (int r = 0; r < 8; r++) {
            MULT_LAYER(MASK_CLEAR)
            ROT_PLAIN()
        }
        EMIT(i)
    }
    STORE()
}

void vsc20_blocks(uint32_t *s, uint32_t *out, long nblocks) {
    LOAD()
    for (long i = 0; i < nblocks; i++) {
        for (int r = 0; r < 9; r++) {
            MULT_LAYER(MASK_CLEAR)
            ROT_D_TWIST()
        }
        EMIT(i)
    }
    STORE()
}

void vsc21_blocks(uint32_t *s, uint32_t *out, long nblocks) {
    LOAD()
    for (long i = 0; i < nblocks; i++) {
        for (int r = 0; r < 9; r++) {
            MULT_LAYER(MASK_AFFINE)
            ROT_PLAIN()
        }
        EMIT(i)
    }
    STORE()
}
