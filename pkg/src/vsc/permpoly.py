"""Vector permutation-polynomial maps over (Z/2^n Z)^m and exhaustive oracles.

The cipher's multiplication layer is an instance of a generic family of
coupled quadratic maps

    out[i] = v[i] * (2*v[i] + mask(v[partner(i)]))  mod 2^n

with the same two mask rules the cipher uses. With the clear2-set1 mask the
map is a bijection only after removing the all-odd tuples from the domain;
with the affine 4x+1 mask it is a bijection on the full domain. Both facts
are checked here by brute force for any domain up to 2^24 elements, which
also covers down-scaled replicas of the full cipher round.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .core import PARTNER as CIPHER_PARTNER
from .core import MaskRule, VscError

# The generic maps couple through the same masks as the cipher rounds.
MapRule = MaskRule

EXHAUSTIVE_DOMAIN_BITS = 24


@dataclass(frozen=True)
class GenericVectorMap:
    """A coupled quadratic map on (Z/2^n Z)^m.

    partner defaults to neighbor coupling i -> i+1 (mod m); pass the
    cipher's fixed partner table to reproduce the multiplication layer.
    """

    rule: MapRule
    n: int
    m: int
    partner: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if not 1 <= self.n <= 16:
            raise VscError("bit width n must be in 1..16, got %d" % self.n)
        if self.m < 1:
            raise VscError("vector length m must be >= 1, got %d" % self.m)
        if self.partner is not None:
            if sorted(self.partner) != list(range(self.m)):
                raise VscError("partner must be a permutation of 0..m-1")

    @property
    def modulus(self) -> int:
        return 1 << self.n

    @property
    def domain_bits(self) -> int:
        return self.n * self.m

    def partner_of(self, i: int) -> int:
        if self.partner is None:
            return (i + 1) % self.m
        return self.partner[i]


def _mask_value(rule: MapRule, x: int, mod: int) -> int:
    if rule is MapRule.CLEAR2_SET1:
        return (x - (x % 4) + 1) % mod
    return (4 * x + 1) % mod


def apply_map(vmap: GenericVectorMap, v: Sequence[int]) -> Tuple[int, ...]:
    """Apply the map to one residue vector."""
    if len(v) != vmap.m:
        raise VscError("expected %d elements, got %d" % (vmap.m, len(v)))
    mod = vmap.modulus
    for e in v:
        if not 0 <= e < mod:
            raise VscError("element %r out of range [0, %d)" % (e, mod))
    return tuple(
        v[i] * (2 * v[i] + _mask_value(vmap.rule, v[vmap.partner_of(i)], mod)) % mod
        for i in range(vmap.m)
    )


@dataclass(frozen=True)
class BijectivityReport:
    """Outcome of an exhaustive sweep over a map's domain."""

    rule: str
    n: int
    m: int
    is_bijection: bool
    domain_size: int
    restricted: bool
    #: first colliding input pair in lexicographic enumeration order
    first_collision: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None
    #: first input whose image left the restricted domain (never happens for
    #: these rules; kept so a failure mode cannot pass silently)
    first_escape: Optional[Tuple[int, ...]] = field(default=None)

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "n": self.n,
            "m": self.m,
            "is_bijection": self.is_bijection,
            "domain_size": self.domain_size,
            "restricted": self.restricted,
            "first_collision": self.first_collision,
            "first_escape": self.first_escape,
        }

    def to_text(self) -> str:
        line = "rule=%s n=%d m=%d restricted=%s domain=%d is_bijection=%s" % (
            self.rule, self.n, self.m,
            str(self.restricted).lower(), self.domain_size,
            str(self.is_bijection).lower(),
        )
        if self.first_collision is not None:
            line += " first_collision=%r->%r" % self.first_collision
        if self.first_escape is not None:
            line += " first_escape=%r" % (self.first_escape,)
        return line


def _unpack(packed: np.ndarray, n: int, m: int) -> list:
    """Packed lexicographic value -> list of m element arrays (index 0 first)."""
    emask = np.uint64((1 << n) - 1)
    return [(packed >> np.uint64(n * (m - 1 - i))) & emask for i in range(m)]


def _pack(elements: list, n: int) -> np.ndarray:
    m = len(elements)
    out = np.zeros_like(elements[0])
    for i, e in enumerate(elements):
        out |= e << np.uint64(n * (m - 1 - i))
    return out


def _apply_map_packed(vmap: GenericVectorMap, packed: np.ndarray) -> np.ndarray:
    n, m, mod = vmap.n, vmap.m, vmap.modulus
    emask = np.uint64(mod - 1)
    v = _unpack(packed, n, m)
    out = []
    for i in range(m):
        p = v[vmap.partner_of(i)]
        if vmap.rule is MapRule.CLEAR2_SET1:
            mask = ((p & ~np.uint64(3)) | np.uint64(1)) & emask
        else:
            mask = ((p << np.uint64(2)) + np.uint64(1)) & emask
        # operands < 2^16 each, so the uint64 product is exact before masking
        out.append((v[i] * ((np.uint64(2) * v[i] + mask) & emask)) & emask)
    return _pack(out, n)


def _tuple_of(packed_value: int, n: int, m: int) -> Tuple[int, ...]:
    emask = (1 << n) - 1
    return tuple((packed_value >> (n * (m - 1 - i))) & emask for i in range(m))


def _first_collision(inputs: np.ndarray, outputs: np.ndarray, n: int, m: int):
    """Earliest duplicate pair in enumeration order, or None."""
    order = np.argsort(outputs, kind="stable")
    srt = outputs[order]
    dup = srt[1:] == srt[:-1]
    if not dup.any():
        return None
    firsts = order[:-1][dup]
    seconds = order[1:][dup]
    k = int(np.argmin(seconds))
    a = int(inputs[firsts[k]])
    b = int(inputs[seconds[k]])
    return _tuple_of(a, n, m), _tuple_of(b, n, m)


def _all_odd_mask(packed: np.ndarray, n: int, m: int) -> np.ndarray:
    odd = np.ones(packed.shape, dtype=bool)
    for e in _unpack(packed, n, m):
        odd &= (e & np.uint64(1)).astype(bool)
    return odd


def bijectivity_check(vmap: GenericVectorMap,
                      restrict_non_all_odd: bool = False) -> BijectivityReport:
    """Enumerate the whole domain and test the map for bijectivity.

    With restrict_non_all_odd the all-odd tuples are removed from the domain
    and the image is additionally required to avoid them.
    """
    bits = vmap.domain_bits
    if bits > EXHAUSTIVE_DOMAIN_BITS:
        raise VscError(
            "domain 2^%d exceeds exhaustive limit 2^%d"
            % (bits, EXHAUSTIVE_DOMAIN_BITS)
        )
    rule_name = vmap.rule.value
    inputs = np.arange(1 << bits, dtype=np.uint64)
    if restrict_non_all_odd:
        inputs = inputs[~_all_odd_mask(inputs, vmap.n, vmap.m)]
    outputs = _apply_map_packed(vmap, inputs)

    collision = _first_collision(inputs, outputs, vmap.n, vmap.m)
    escape = None
    if restrict_non_all_odd and collision is None:
        escaped = _all_odd_mask(outputs, vmap.n, vmap.m)
        if escaped.any():
            escape = _tuple_of(int(inputs[int(np.argmax(escaped))]),
                               vmap.n, vmap.m)
    return BijectivityReport(
        rule=rule_name,
        n=vmap.n,
        m=vmap.m,
        is_bijection=collision is None and escape is None,
        domain_size=int(inputs.size),
        restricted=restrict_non_all_odd,
        first_collision=collision,
        first_escape=escape,
    )


# --- down-scaled cipher round ----------------------------------------------

def scaled_round(n: int, state8: Sequence[int]) -> Tuple[int, ...]:
    """The VSC 2.1 round shrunk to eight n-bit words (n in 1..3).

    Affine 4x+1 mask with the cipher's partner table, then a 5-bit left
    rotation of the 8n-bit concatenation (word 0 most significant). At
    8n <= 24 bits the full round becomes exhaustively checkable.
    """
    if not 1 <= n <= 3:
        raise VscError("scaled round needs 8*n <= 24, got n=%d" % n)
    if len(state8) != 8:
        raise VscError("state must have 8 words, got %d" % len(state8))
    mod = 1 << n
    for w in state8:
        if not 0 <= w < mod:
            raise VscError("word %r out of range [0, %d)" % (w, mod))
    mixed = [
        state8[i] * (2 * state8[i] + (4 * state8[CIPHER_PARTNER[i]] + 1) % mod) % mod
        for i in range(8)
    ]
    packed = 0
    for w in mixed:
        packed = (packed << n) | w
    total = 8 * n
    packed = ((packed << 5) | (packed >> (total - 5))) & ((1 << total) - 1)
    return tuple((packed >> (n * (7 - i))) & (mod - 1) for i in range(8))


def scaled_round_packed(n: int, packed: np.ndarray) -> np.ndarray:
    """Vectorized scaled_round on packed 8n-bit state values."""
    if not 1 <= n <= 3:
        raise VscError("scaled round needs 8*n <= 24, got n=%d" % n)
    emask = np.uint64((1 << n) - 1)
    words = [(packed >> np.uint64(n * (7 - i))) & emask for i in range(8)]
    mixed = []
    for i in range(8):
        m = ((words[CIPHER_PARTNER[i]] << np.uint64(2)) + np.uint64(1)) & emask
        mixed.append((words[i] * ((np.uint64(2) * words[i] + m) & emask)) & emask)
    out = np.zeros_like(packed)
    for w in mixed:
        out = (out << np.uint64(n)) | w
    total = np.uint64(8 * n)
    full = np.uint64((1 << (8 * n)) - 1)
    return ((out << np.uint64(5)) | (out >> (total - np.uint64(5)))) & full


def scaled_round_check(n: int) -> BijectivityReport:
    """Exhaustively verify that the scaled round permutes all 2^(8n) states."""
    states = np.arange(1 << (8 * n), dtype=np.uint64)
    outputs = scaled_round_packed(n, states)
    collision = _first_collision(states, outputs, n, 8)
    return BijectivityReport(
        rule="scaled-round",
        n=n,
        m=8,
        is_bijection=collision is None,
        domain_size=int(states.size),
        restricted=False,
        first_collision=collision,
    )
