"""Bit-exact implementation of the Vector Stream Cipher family.

Three variants share one round skeleton (mask, coupled quadratic
multiplication, 5-bit rotation of the 256-bit state):

* ``VSC128`` -- clear-low-two-bits mask, plain rotation, no preprocessing,
  8 rounds per keystream block, full 128-bit key.
* ``VSC20``  -- same mask, rotation with the D-twist (which pins the least
  significant bit of D to 0), 30 preprocessing rounds, 9 rounds per block,
  127-bit effective key (the low bit of the D key word is forced to 0).
* ``VSC21``  -- affine mask ``4x+1``, plain rotation, 30 preprocessing
  rounds, 9 rounds per block, full 128-bit key.

Interchange convention (the cipher itself is byte-order agnostic, so this
library fixes one): a 128-bit key maps to words A,B,C,D big-endian, bytes
0-3 -> A through bytes 12-15 -> D; an IV maps to X,Y,Z,W the same way; a
keystream block serializes X,Y,Z,W big-endian. Keys and IVs in text form
are exactly 32 lowercase hex digits.

All functions here are pure and operate on plain values; states can be
copied and shared freely between threads.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple, Tuple, Union

MASK32 = 0xFFFFFFFF

#: Fixed state words A,B,C,D at the start of VSC 2.0 / 2.1 preprocessing.
PREPROCESS_CONSTANTS = (0xFEDCBA98, 0x01234567, 0x89ABCDEF, 0x76543210)


class VscError(ValueError):
    """Base class for cipher usage errors."""


class OddDStateError(VscError):
    """A VSC 2.0 round was asked to process a state with odd D."""


class UnsupportedVariantError(VscError):
    """Operation not defined for this variant (e.g. VSC128 preprocessing)."""


class MaskRule(Enum):
    CLEAR2_SET1 = "clear2-set1"
    AFFINE_4X_PLUS_1 = "4x-plus-1"


class RotationRule(Enum):
    PLAIN_ROT5 = "rot5"
    ROT5_D_TWIST = "rot5-d-twist"


class KeyRule(Enum):
    FULL_128 = "full-128"
    D_LSB_ZERO = "d-lsb-zero"


@dataclass(frozen=True)
class VariantConfig:
    name: str
    mask_rule: MaskRule
    rotation_rule: RotationRule
    preprocessing_rounds: int
    block_rounds: int
    key_rule: KeyRule


VSC128 = VariantConfig("vsc128", MaskRule.CLEAR2_SET1, RotationRule.PLAIN_ROT5,
                       0, 8, KeyRule.FULL_128)
VSC20 = VariantConfig("vsc20", MaskRule.CLEAR2_SET1, RotationRule.ROT5_D_TWIST,
                      30, 9, KeyRule.D_LSB_ZERO)
VSC21 = VariantConfig("vsc21", MaskRule.AFFINE_4X_PLUS_1, RotationRule.PLAIN_ROT5,
                      30, 9, KeyRule.FULL_128)

VARIANTS = {cfg.name: cfg for cfg in (VSC128, VSC20, VSC21)}


def get_variant(name: str) -> VariantConfig:
    normalized = name.lower()
    for junk in (".", "-", "_", " "):
        normalized = normalized.replace(junk, "")
    try:
        return VARIANTS[normalized]
    except KeyError:
        raise UnsupportedVariantError(
            "unknown variant %r (expected one of %s)" % (name, ", ".join(VARIANTS))
        ) from None


class CipherState(NamedTuple):
    """The 256-bit internal state, eight 32-bit words in fixed order."""

    A: int
    B: int
    C: int
    D: int
    X: int
    Y: int
    Z: int
    W: int


ZERO_STATE = CipherState(0, 0, 0, 0, 0, 0, 0, 0)


def parse_hex_128(text: str, what: str = "value") -> bytes:
    """Parse THE interchange form of a 128-bit value: exactly 32 hex digits."""
    s = text.strip()
    if len(s) != 32:
        raise VscError("%s must be exactly 32 hex digits, got %d" % (what, len(s)))
    try:
        return bytes.fromhex(s)
    except ValueError:
        raise VscError("%s contains non-hex characters: %r" % (what, text)) from None


def words_from_bytes(data: bytes) -> Tuple[int, int, int, int]:
    """16 bytes -> four 32-bit words, big-endian per word."""
    if len(data) != 16:
        raise VscError("expected 16 bytes, got %d" % len(data))
    return (
        int.from_bytes(data[0:4], "big"),
        int.from_bytes(data[4:8], "big"),
        int.from_bytes(data[8:12], "big"),
        int.from_bytes(data[12:16], "big"),
    )


def bytes_from_words(words) -> bytes:
    return b"".join(int(w).to_bytes(4, "big") for w in words)


@dataclass(frozen=True)
class _Bits128:
    data: bytes

    def __post_init__(self):
        if not isinstance(self.data, (bytes, bytearray)):
            raise VscError("expected bytes, got %s" % type(self.data).__name__)
        if len(self.data) != 16:
            raise VscError("expected exactly 16 bytes, got %d" % len(self.data))

    @property
    def words(self) -> Tuple[int, int, int, int]:
        return words_from_bytes(self.data)

    @classmethod
    def from_hex(cls, text: str):
        return cls(parse_hex_128(text, cls.__name__))

    def hex(self) -> str:
        return self.data.hex()


class KeyMaterial(_Bits128):
    """128-bit secret key; words (kA,kB,kC,kD) big-endian per word."""


class InitVector(_Bits128):
    """128-bit initial vector; words (vX,vY,vZ,vW) big-endian per word."""


def _coerce_key(key: Union[KeyMaterial, bytes]) -> KeyMaterial:
    return key if isinstance(key, KeyMaterial) else KeyMaterial(key)


def _coerce_iv(iv: Union[InitVector, bytes]) -> InitVector:
    return iv if isinstance(iv, InitVector) else InitVector(iv)


# --- the round -------------------------------------------------------------

def mask_clear2_set1(w: int) -> int:
    """(w - (w mod 4) + 1) mod 2**32: low two bits replaced by binary 01."""
    return (w & 0xFFFFFFFC) | 1


def mask_affine_4x_plus_1(w: int) -> int:
    """(4*w + 1) mod 2**32."""
    return ((w << 2) + 1) & MASK32


_MASK_FN = {
    MaskRule.CLEAR2_SET1: mask_clear2_set1,
    MaskRule.AFFINE_4X_PLUS_1: mask_affine_4x_plus_1,
}

# Word i multiplies against the mask of word PARTNER[i] of the input state:
# A<-Y, B<-X, C<-Z, D<-W, X<-C, Y<-D, Z<-A, W<-B.
PARTNER = (5, 4, 6, 7, 2, 3, 0, 1)


def multiplication_layer(state: CipherState, mask_rule: MaskRule) -> CipherState:
    """Coupled quadratic layer: out[i] = s[i]*(2*s[i] + mask(s[partner(i)]))."""
    mask = _MASK_FN[mask_rule]
    m = [mask(w) for w in state]
    return CipherState(
        *(w * (2 * w + m[p]) & MASK32 for w, p in zip(state, PARTNER))
    )


def rotate256_left5(state: CipherState) -> CipherState:
    """5-bit left rotation of the state viewed as a 256-bit string (A first)."""
    s = state
    return CipherState(
        ((s[0] << 5) & MASK32) ^ (s[1] >> 27),
        ((s[1] << 5) & MASK32) ^ (s[2] >> 27),
        ((s[2] << 5) & MASK32) ^ (s[3] >> 27),
        ((s[3] << 5) & MASK32) ^ (s[4] >> 27),
        ((s[4] << 5) & MASK32) ^ (s[5] >> 27),
        ((s[5] << 5) & MASK32) ^ (s[6] >> 27),
        ((s[6] << 5) & MASK32) ^ (s[7] >> 27),
        ((s[7] << 5) & MASK32) ^ (s[0] >> 27),
    )


def rotate256_right5(state: CipherState) -> CipherState:
    """Exact inverse of rotate256_left5."""
    s = state
    return CipherState(
        *((s[i] >> 5) ^ ((s[(i - 1) % 8] << 27) & MASK32) for i in range(8))
    )


def rotate256_left5_d_twist(state: CipherState) -> CipherState:
    """Like rotate256_left5 but D = (D'<<5) xor ((X'>>27)<<1), so D is even.

    The shifted carry out of X' lands one position higher than in the plain
    rotation; bit 5 of the new D genuinely XORs (bit 0 of D') with
    (bit 31 of X'), and bit 0 is always 0.
    """
    plain = rotate256_left5(state)
    d = ((state[3] << 5) & MASK32) ^ ((state[4] >> 27) << 1)
    return plain._replace(D=d)


_ROTATE_FN = {
    RotationRule.PLAIN_ROT5: rotate256_left5,
    RotationRule.ROT5_D_TWIST: rotate256_left5_d_twist,
}


def apply_round(cfg: VariantConfig, state: CipherState) -> CipherState:
    """One round: multiplication layer then the variant's rotation.

    For VSC 2.0 the input state must have even D; anything else is outside
    the domain on which the round is a bijection, so it is rejected rather
    than silently processed.
    """
    if cfg.rotation_rule is RotationRule.ROT5_D_TWIST and state[3] & 1:
        raise OddDStateError(
            "vsc20 round requires even D, got D=0x%08X" % state[3]
        )
    return _ROTATE_FN[cfg.rotation_rule](multiplication_layer(state, cfg.mask_rule))


# --- key/iv schedule -------------------------------------------------------

def preprocess(cfg: VariantConfig, iv: Union[InitVector, bytes]) -> CipherState:
    """Condition the IV: fixed constants in A..D, IV in X..W, then 30 rounds.

    Key-independent by design; the secret key is loaded afterwards with
    load_key. Not defined for VSC128.
    """
    if cfg.preprocessing_rounds == 0:
        raise UnsupportedVariantError("%s has no preprocessing" % cfg.name)
    vx, vy, vz, vw = _coerce_iv(iv).words
    state = CipherState(*PREPROCESS_CONSTANTS, vx, vy, vz, vw)
    for _ in range(cfg.preprocessing_rounds):
        state = apply_round(cfg, state)
    return state


def load_key(cfg: VariantConfig, state: CipherState,
             key: Union[KeyMaterial, bytes]) -> CipherState:
    """Overwrite A..D with the key words, leaving X..W untouched.

    Under the VSC 2.0 key rule the least significant bit of D is forced to
    0 regardless of the supplied key bit (127-bit effective key).
    """
    ka, kb, kc, kd = _coerce_key(key).words
    if cfg.key_rule is KeyRule.D_LSB_ZERO:
        kd &= 0xFFFFFFFE
    return CipherState(ka, kb, kc, kd, state.X, state.Y, state.Z, state.W)


def init_state(cfg: VariantConfig, key: Union[KeyMaterial, bytes],
               iv: Union[InitVector, bytes]) -> CipherState:
    """Full keystream setup for a (key, iv) pair."""
    if cfg.preprocessing_rounds == 0:
        ka, kb, kc, kd = _coerce_key(key).words
        vx, vy, vz, vw = _coerce_iv(iv).words
        return CipherState(ka, kb, kc, kd, vx, vy, vz, vw)
    return load_key(cfg, preprocess(cfg, iv), key)


# --- keystream -------------------------------------------------------------

class KeystreamBlock(NamedTuple):
    """One 128-bit keystream block, the X,Y,Z,W words after a block's rounds."""

    X: int
    Y: int
    Z: int
    W: int

    def to_bytes(self) -> bytes:
        return bytes_from_words(self)


def next_block(cfg: VariantConfig, state: CipherState):
    """Run one block's rounds; return (chained state, emitted block).

    The returned state carries across blocks -- a stream never re-keys.
    """
    for _ in range(cfg.block_rounds):
        state = apply_round(cfg, state)
    return state, KeystreamBlock(state.X, state.Y, state.Z, state.W)


def keystream_blocks(cfg: VariantConfig, key, iv) -> Iterator[KeystreamBlock]:
    """Infinite iterator over keystream blocks for (key, iv)."""
    state = init_state(cfg, key, iv)
    while True:
        state, block = next_block(cfg, state)
        yield block


def keystream(cfg: VariantConfig, key, iv, n_bytes: int, engine: str = "auto") -> bytes:
    """First n_bytes of the keystream for (key, iv).

    engine: "pure" runs the scalar Python rounds above; "fast" requires the
    compiled kernels in vsc.fastgen; "auto" picks fast when it is available
    and the request is large enough to amortize dispatch. All engines are
    bit-identical.
    """
    if n_bytes < 0:
        raise VscError("n_bytes must be >= 0")
    if n_bytes == 0:
        return b""
    if engine not in ("auto", "pure", "fast"):
        raise VscError("unknown engine %r" % engine)
    if engine != "pure":
        try:
            from . import fastgen
        except ImportError:
            if engine == "fast":
                raise
        else:
            if engine == "fast" or n_bytes >= 1024:
                return fastgen.keystream(cfg, _coerce_key(key), _coerce_iv(iv),
                                         n_bytes)
    out = bytearray()
    for block in keystream_blocks(cfg, key, iv):
        out += block.to_bytes()
        if len(out) >= n_bytes:
            return bytes(out[:n_bytes])
    raise AssertionError("unreachable")


def xor_crypt(cfg: VariantConfig, key, iv, data: bytes, engine: str = "auto") -> bytes:
    """XOR data with the keystream; encryption and decryption are identical.

    Messages need not be multiples of 16 bytes; the final block is truncated.
    """
    ks = keystream(cfg, key, iv, len(data), engine=engine)
    return bytes(a ^ b for a, b in zip(data, ks))


class StreamCipher:
    """Incremental XOR cipher over one (key, iv) stream.

    Feed arbitrary-size chunks to crypt(); keystream state chains across
    calls, so a file can be processed in constant memory. Not thread-safe
    (one stream's blocks are inherently sequential).
    """

    def __init__(self, cfg: VariantConfig, key, iv, engine: str = "auto"):
        self.cfg = cfg
        self.state = init_state(cfg, key, iv)
        self._buffer = b""
        if engine == "auto":
            try:
                from . import fastgen  # noqa: F401
                engine = "fast"
            except ImportError:
                engine = "pure"
        self.engine = engine

    def _take_keystream(self, n: int) -> bytes:
        while len(self._buffer) < n:
            need_blocks = (n - len(self._buffer) + 15) // 16
            if self.engine == "fast":
                from . import fastgen
                self.state, chunk = fastgen.run_blocks(self.cfg, self.state,
                                                       need_blocks)
                self._buffer += chunk
            else:
                self.state, block = next_block(self.cfg, self.state)
                self._buffer += block.to_bytes()
        out, self._buffer = self._buffer[:n], self._buffer[n:]
        return out

    def crypt(self, data: bytes) -> bytes:
        ks = self._take_keystream(len(data))
        return bytes(a ^ b for a, b in zip(data, ks))
