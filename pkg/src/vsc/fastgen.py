"""Compiled single-stream keystream kernels.

One numba kernel per variant, each a straight-line transcription of the
round into unsigned 64-bit arithmetic. Values are reduced modulo 2^32
exactly once per quadratic term, after the multiply: mask values and
multiplier sums may ride above 2^32 because the uint64 product wraps
modulo 2^64, which agrees with the true product modulo 2^32. Rotation
inputs must be exact 32-bit values, hence the single reduction. This
mirrors what a C compiler emits for native 32-bit unsigned types.

Used for steady-state throughput measurements and as the fast path behind
vsc.core.keystream; one stream's blocks are inherently sequential, so
these kernels are scalar by design. Bit-exactness against the pure-Python
rounds is pinned by tests.
"""

import numpy as np
from numba import njit, uint64

from .core import CipherState, VariantConfig, init_state

M32 = uint64(0xFFFFFFFF)


@njit(cache=True)
def _blocks_vsc128(state, out, nblocks):
    A = uint64(state[0]); B = uint64(state[1])
    C = uint64(state[2]); D = uint64(state[3])
    X = uint64(state[4]); Y = uint64(state[5])
    Z = uint64(state[6]); W = uint64(state[7])
    for blk in range(nblocks):
        for _ in range(8):
            a = A - (A & uint64(3)) + uint64(1)
            b = B - (B & uint64(3)) + uint64(1)
            c = C - (C & uint64(3)) + uint64(1)
            d = D - (D & uint64(3)) + uint64(1)
            x = X - (X & uint64(3)) + uint64(1)
            y = Y - (Y & uint64(3)) + uint64(1)
            z = Z - (Z & uint64(3)) + uint64(1)
            w = W - (W & uint64(3)) + uint64(1)
            Ap = (A * (A + A + y)) & M32
            Bp = (B * (B + B + x)) & M32
            Cp = (C * (C + C + z)) & M32
            Dp = (D * (D + D + w)) & M32
            Xp = (X * (X + X + c)) & M32
            Yp = (Y * (Y + Y + d)) & M32
            Zp = (Z * (Z + Z + a)) & M32
            Wp = (W * (W + W + b)) & M32
            A = ((Ap << uint64(5)) & M32) ^ (Bp >> uint64(27))
            B = ((Bp << uint64(5)) & M32) ^ (Cp >> uint64(27))
            C = ((Cp << uint64(5)) & M32) ^ (Dp >> uint64(27))
            D = ((Dp << uint64(5)) & M32) ^ (Xp >> uint64(27))
            X = ((Xp << uint64(5)) & M32) ^ (Yp >> uint64(27))
            Y = ((Yp << uint64(5)) & M32) ^ (Zp >> uint64(27))
            Z = ((Zp << uint64(5)) & M32) ^ (Wp >> uint64(27))
            W = ((Wp << uint64(5)) & M32) ^ (Ap >> uint64(27))
        out[4 * blk] = X
        out[4 * blk + 1] = Y
        out[4 * blk + 2] = Z
        out[4 * blk + 3] = W
    state[0] = A; state[1] = B; state[2] = C; state[3] = D
    state[4] = X; state[5] = Y; state[6] = Z; state[7] = W


@njit(cache=True)
def _blocks_vsc20(state, out, nblocks):
    A = uint64(state[0]); B = uint64(state[1])
    C = uint64(state[2]); D = uint64(state[3])
    X = uint64(state[4]); Y = uint64(state[5])
    Z = uint64(state[6]); W = uint64(state[7])
    for blk in range(nblocks):
        for _ in range(9):
            a = A - (A & uint64(3)) + uint64(1)
            b = B - (B & uint64(3)) + uint64(1)
            c = C - (C & uint64(3)) + uint64(1)
            d = D - (D & uint64(3)) + uint64(1)
            x = X - (X & uint64(3)) + uint64(1)
            y = Y - (Y & uint64(3)) + uint64(1)
            z = Z - (Z & uint64(3)) + uint64(1)
            w = W - (W & uint64(3)) + uint64(1)
            Ap = (A * (A + A + y)) & M32
            Bp = (B * (B + B + x)) & M32
            Cp = (C * (C + C + z)) & M32
            Dp = (D * (D + D + w)) & M32
            Xp = (X * (X + X + c)) & M32
            Yp = (Y * (Y + Y + d)) & M32
            Zp = (Z * (Z + Z + a)) & M32
            Wp = (W * (W + W + b)) & M32
            A = ((Ap << uint64(5)) & M32) ^ (Bp >> uint64(27))
            B = ((Bp << uint64(5)) & M32) ^ (Cp >> uint64(27))
            C = ((Cp << uint64(5)) & M32) ^ (Dp >> uint64(27))
            D = ((Dp << uint64(5)) & M32) ^ ((Xp >> uint64(27)) << uint64(1))
            X = ((Xp << uint64(5)) & M32) ^ (Yp >> uint64(27))
            Y = ((Yp << uint64(5)) & M32) ^ (Zp >> uint64(27))
            Z = ((Zp << uint64(5)) & M32) ^ (Wp >> uint64(27))
            W = ((Wp << uint64(5)) & M32) ^ (Ap >> uint64(27))
        out[4 * blk] = X
        out[4 * blk + 1] = Y
        out[4 * blk + 2] = Z
        out[4 * blk + 3] = W
    state[0] = A; state[1] = B; state[2] = C; state[3] = D
    state[4] = X; state[5] = Y; state[6] = Z; state[7] = W


@njit(cache=True)
def _blocks_vsc21(state, out, nblocks):
    A = uint64(state[0]); B = uint64(state[1])
    C = uint64(state[2]); D = uint64(state[3])
    X = uint64(state[4]); Y = uint64(state[5])
    Z = uint64(state[6]); W = uint64(state[7])
    for blk in range(nblocks):
        for _ in range(9):
            # S*(2S + 4*partner + 1) restructured as S + 2*S*(S + 2*partner)
            Ap = (A + ((A * (A + (Y << uint64(1)))) << uint64(1))) & M32
            Bp = (B + ((B * (B + (X << uint64(1)))) << uint64(1))) & M32
            Cp = (C + ((C * (C + (Z << uint64(1)))) << uint64(1))) & M32
            Dp = (D + ((D * (D + (W << uint64(1)))) << uint64(1))) & M32
            Xp = (X + ((X * (X + (C << uint64(1)))) << uint64(1))) & M32
            Yp = (Y + ((Y * (Y + (D << uint64(1)))) << uint64(1))) & M32
            Zp = (Z + ((Z * (Z + (A << uint64(1)))) << uint64(1))) & M32
            Wp = (W + ((W * (W + (B << uint64(1)))) << uint64(1))) & M32
            A = ((Ap << uint64(5)) & M32) ^ (Bp >> uint64(27))
            B = ((Bp << uint64(5)) & M32) ^ (Cp >> uint64(27))
            C = ((Cp << uint64(5)) & M32) ^ (Dp >> uint64(27))
            D = ((Dp << uint64(5)) & M32) ^ (Xp >> uint64(27))
            X = ((Xp << uint64(5)) & M32) ^ (Yp >> uint64(27))
            Y = ((Yp << uint64(5)) & M32) ^ (Zp >> uint64(27))
            Z = ((Zp << uint64(5)) & M32) ^ (Wp >> uint64(27))
            W = ((Wp << uint64(5)) & M32) ^ (Ap >> uint64(27))
        out[4 * blk] = X
        out[4 * blk + 1] = Y
        out[4 * blk + 2] = Z
        out[4 * blk + 3] = W
    state[0] = A; state[1] = B; state[2] = C; state[3] = D
    state[4] = X; state[5] = Y; state[6] = Z; state[7] = W


_KERNELS = {
    "vsc128": _blocks_vsc128,
    "vsc20": _blocks_vsc20,
    "vsc21": _blocks_vsc21,
}


def kernel_for(cfg: VariantConfig):
    return _KERNELS[cfg.name]


def generate_blocks(cfg: VariantConfig, state_words: np.ndarray,
                    nblocks: int) -> np.ndarray:
    """Run nblocks block steps from state_words (uint32[8], updated in place).

    Returns the emitted keystream as a uint32 array of 4*nblocks words.
    """
    out = np.empty(4 * nblocks, dtype=np.uint32)
    _KERNELS[cfg.name](state_words, out, nblocks)
    return out


def run_blocks(cfg: VariantConfig, state: CipherState, nblocks: int):
    """next_block iterated nblocks times; returns (state, keystream bytes)."""
    arr = np.array(state, dtype=np.uint32)
    words = generate_blocks(cfg, arr, nblocks)
    return CipherState(*(int(w) for w in arr)), words.astype(">u4").tobytes()


def keystream(cfg: VariantConfig, key, iv, n_bytes: int) -> bytes:
    """Compiled equivalent of vsc.core.keystream (prefix of the stream)."""
    state = init_state(cfg, key, iv)
    _, data = run_blocks(cfg, state, (n_bytes + 15) // 16)
    return data[:n_bytes]


def warmup():
    """Force JIT compilation of all kernels (first call is not free)."""
    for kern in _KERNELS.values():
        st = np.zeros(8, dtype=np.uint32)
        out = np.empty(4, dtype=np.uint32)
        kern(st, out, 1)
