"""Vectorized multi-stream engine: N independent cipher states in lockstep.

States live in (8, N) uint32 arrays (row order A,B,C,D,X,Y,Z,W); every
round transforms all N lanes at once with numpy integer ops, which wrap
modulo 2^32 like the scalar implementation. One lane of this engine is
bit-identical to vsc.core -- the analysis experiments (avalanche trials,
battery keystreams) are embarrassingly parallel across lanes, so they run
here instead of in the scalar loop.

Blocks within one lane remain sequential; this engine parallelizes across
streams, never within one.
"""

import numpy as np

from .core import (
    PARTNER,
    PREPROCESS_CONSTANTS,
    KeyRule,
    MaskRule,
    RotationRule,
    UnsupportedVariantError,
    VariantConfig,
)

_PARTNER_ROWS = list(PARTNER)
_U = np.uint32


def _masks(S: np.ndarray, rule: MaskRule) -> np.ndarray:
    if rule is MaskRule.CLEAR2_SET1:
        return (S & _U(0xFFFFFFFC)) | _U(1)
    return (S << _U(2)) + _U(1)


def round_batch(cfg: VariantConfig, S: np.ndarray) -> np.ndarray:
    """One round applied to every lane of an (8, N) uint32 state array."""
    m = _masks(S, cfg.mask_rule)[_PARTNER_ROWS]
    T = S * ((S << _U(1)) + m)
    R = (T << _U(5)) ^ (np.roll(T, -1, axis=0) >> _U(27))
    if cfg.rotation_rule is RotationRule.ROT5_D_TWIST:
        R[3] = (T[3] << _U(5)) ^ ((T[4] >> _U(27)) << _U(1))
    return R


def words_from_bytes_batch(data: np.ndarray) -> np.ndarray:
    """(N, 16) uint8 -> (4, N) uint32, big-endian per word."""
    return np.ascontiguousarray(data).view(">u4").astype(np.uint32).T


def preprocess_batch(cfg: VariantConfig, iv_words: np.ndarray) -> np.ndarray:
    """Preprocess N IVs at once; iv_words is (4, N) uint32, result (8, N)."""
    if cfg.preprocessing_rounds == 0:
        raise UnsupportedVariantError("%s has no preprocessing" % cfg.name)
    n = iv_words.shape[1]
    S = np.empty((8, n), dtype=np.uint32)
    for i, c in enumerate(PREPROCESS_CONSTANTS):
        S[i] = c
    S[4:8] = iv_words
    for _ in range(cfg.preprocessing_rounds):
        S = round_batch(cfg, S)
    return S


def init_state_batch(cfg: VariantConfig, key_words: np.ndarray,
                     iv_words: np.ndarray) -> np.ndarray:
    """Per-lane init_state; key_words and iv_words are (4, N) uint32."""
    n = key_words.shape[1]
    if cfg.preprocessing_rounds == 0:
        S = np.empty((8, n), dtype=np.uint32)
        S[0:4] = key_words
        S[4:8] = iv_words
    else:
        S = preprocess_batch(cfg, iv_words)
        S[0:4] = key_words
    if cfg.key_rule is KeyRule.D_LSB_ZERO:
        S[3] &= _U(0xFFFFFFFE)
    return S


def keystream_bytes_batch(cfg: VariantConfig, keys: np.ndarray,
                          ivs: np.ndarray, n_bytes: int) -> np.ndarray:
    """Per-lane keystream prefix: (N, 16) uint8 keys/ivs -> (N, n_bytes) uint8."""
    S = init_state_batch(cfg, words_from_bytes_batch(keys),
                         words_from_bytes_batch(ivs))
    lanes = S.shape[1]
    nblocks = (n_bytes + 15) // 16
    blocks = np.empty((nblocks, 4, lanes), dtype=np.uint32)
    for b in range(nblocks):
        for _ in range(cfg.block_rounds):
            S = round_batch(cfg, S)
        blocks[b] = S[4:8]
    # (nblocks, 4, N) words -> per-lane big-endian byte streams
    out = (
        blocks.transpose(2, 0, 1)
        .astype(">u4", order="C")
        .reshape(lanes, -1)
        .view(np.uint8)
        .reshape(lanes, nblocks * 16)
    )
    return out[:, :n_bytes]


def hamming_distance_batch(a_words: np.ndarray, b_words: np.ndarray) -> np.ndarray:
    """Per-lane popcount of XOR over (k, N) uint32 word arrays."""
    return np.bitwise_count(a_words ^ b_words).sum(axis=0, dtype=np.int64)
