"""Reduced SP800-22-style randomness battery.

Seven tests from the NIST statistical test suite: monobit frequency,
block frequency, runs, longest run of ones, cumulative sums (both
directions), serial (two p-values) and approximate entropy -- nine
p-values per sequence. Formulas follow the standard; each function is
pinned to the standard's published worked examples in the test suite.

A sequence too short for a test yields a not-applicable result rather
than a made-up p-value. Pass/fail uses the conventional alpha = 0.01.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.special import erfc, gammaincc
from scipy.stats import norm

ALPHA = 0.01


@dataclass
class RandomnessTestResult:
    test_name: str
    p_value: Optional[float]
    passed: Optional[bool]
    parameters: dict = field(default_factory=dict)
    applicable: bool = True
    note: str = ""

    @classmethod
    def from_p(cls, name: str, p: float, **params) -> "RandomnessTestResult":
        p = float(p)
        return cls(name, p, p >= ALPHA, params)

    @classmethod
    def not_applicable(cls, name: str, note: str, **params):
        return cls(name, None, None, params, applicable=False, note=note)


def bits_from_bytes(data: bytes, n_bits: Optional[int] = None) -> np.ndarray:
    """Unpack bytes into a bit array, most significant bit of each byte first."""
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    return bits if n_bits is None else bits[:n_bits]


def bits_from_string(text: str) -> np.ndarray:
    return np.array([int(c) for c in text if c in "01"], dtype=np.uint8)


def monobit(bits: np.ndarray) -> List[RandomnessTestResult]:
    n = bits.size
    if n < 1:
        return [RandomnessTestResult.not_applicable("monobit", "empty sequence")]
    s = abs(2 * int(bits.sum()) - n)
    p = erfc(s / math.sqrt(n) / math.sqrt(2))
    return [RandomnessTestResult.from_p("monobit", p, n=n)]


def block_frequency(bits: np.ndarray,
                    block_size: Optional[int] = None) -> List[RandomnessTestResult]:
    n = bits.size
    if block_size is None:
        # standard's guidance: M >= 20, M > n/100, and at most 100 blocks
        block_size = max(20, -(-n // 80))
    m = block_size
    nblocks = n // m
    if nblocks < 1:
        return [RandomnessTestResult.not_applicable(
            "block_frequency", "needs at least one block of %d bits" % m, M=m)]
    pi = bits[: nblocks * m].reshape(nblocks, m).mean(axis=1)
    chi2 = 4.0 * m * float(((pi - 0.5) ** 2).sum())
    p = gammaincc(nblocks / 2.0, chi2 / 2.0)
    return [RandomnessTestResult.from_p("block_frequency", p, M=m, N=nblocks)]


def runs(bits: np.ndarray) -> List[RandomnessTestResult]:
    n = bits.size
    if n < 2:
        return [RandomnessTestResult.not_applicable("runs", "needs >= 2 bits")]
    pi = float(bits.mean())
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        # monobit-style precondition from the standard: hopelessly biased
        return [RandomnessTestResult.from_p("runs", 0.0, n=n, pi=pi,
                                            precondition_failed=True)]
    v = 1 + int(np.count_nonzero(np.diff(bits)))
    num = abs(v - 2.0 * n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    p = erfc(num / den)
    return [RandomnessTestResult.from_p("runs", p, n=n, runs=v)]


_LONGEST_RUN_TABLES = {
    # M: (K, lowest class, probabilities pi_0..pi_K)
    8: (3, 1, (0.2148, 0.3672, 0.2305, 0.1875)),
    128: (5, 4, (0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124)),
    10000: (6, 10, (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727)),
}


def _longest_one_run(block: np.ndarray) -> int:
    padded = np.concatenate(([0], block, [0]))
    changes = np.flatnonzero(np.diff(padded))
    if changes.size == 0:
        return 0
    return int((changes[1::2] - changes[::2]).max())


def longest_run_of_ones(bits: np.ndarray) -> List[RandomnessTestResult]:
    n = bits.size
    if n < 128:
        return [RandomnessTestResult.not_applicable(
            "longest_run", "needs >= 128 bits, got %d" % n)]
    if n < 6272:
        m = 8
    elif n < 750000:
        m = 128
    else:
        m = 10000
    k, lowest, pi = _LONGEST_RUN_TABLES[m]
    nblocks = n // m
    blocks = bits[: nblocks * m].reshape(nblocks, m)
    nu = np.zeros(k + 1, dtype=np.int64)
    for block in blocks:
        run = _longest_one_run(block)
        nu[min(max(run - lowest, 0), k)] += 1
    expected = nblocks * np.asarray(pi)
    chi2 = float(((nu - expected) ** 2 / expected).sum())
    p = gammaincc(k / 2.0, chi2 / 2.0)
    return [RandomnessTestResult.from_p("longest_run", p, M=m, N=nblocks,
                                        nu=[int(x) for x in nu])]


def _trunc_div(a: int, b: int) -> int:
    # C-style integer division (toward zero), as in the reference suite
    q, r = divmod(a, b)
    if (a < 0) != (b < 0) and r != 0:
        q += 1
    return q


def _cusum_p(z: int, n: int) -> float:
    sqrt_n = math.sqrt(n)
    k_lo = _trunc_div(_trunc_div(-n, z) + 1, 4)
    k_hi = _trunc_div(_trunc_div(n, z) - 1, 4)
    ks = np.arange(k_lo, k_hi + 1)
    total = 1.0 - float(
        (norm.cdf((4 * ks + 1) * z / sqrt_n) - norm.cdf((4 * ks - 1) * z / sqrt_n)).sum()
    )
    k_lo2 = _trunc_div(_trunc_div(-n, z) - 3, 4)
    ks2 = np.arange(k_lo2, k_hi + 1)
    total += float(
        (norm.cdf((4 * ks2 + 3) * z / sqrt_n) - norm.cdf((4 * ks2 + 1) * z / sqrt_n)).sum()
    )
    return min(max(total, 0.0), 1.0)


def cumulative_sums(bits: np.ndarray) -> List[RandomnessTestResult]:
    n = bits.size
    if n < 2:
        return [RandomnessTestResult.not_applicable("cusum_forward", "needs >= 2 bits"),
                RandomnessTestResult.not_applicable("cusum_reverse", "needs >= 2 bits")]
    steps = 2 * bits.astype(np.int64) - 1
    out = []
    for name, seq in (("cusum_forward", steps), ("cusum_reverse", steps[::-1])):
        z = int(np.abs(np.cumsum(seq)).max())
        if z == 0:
            out.append(RandomnessTestResult.from_p(name, 0.0, n=n, z=0))
            continue
        out.append(RandomnessTestResult.from_p(name, _cusum_p(z, n), n=n, z=z))
    return out


def _window_counts(bits: np.ndarray, m: int) -> np.ndarray:
    """Counts of all overlapping m-bit windows of the circular extension."""
    n = bits.size
    ext = np.concatenate([bits, bits[: m - 1]]).astype(np.uint32)
    vals = np.zeros(n, dtype=np.uint32)
    for j in range(m):
        vals = (vals << np.uint32(1)) | ext[j : j + n]
    return np.bincount(vals, minlength=1 << m)


def _psi_sq(counts: np.ndarray, n: int, m: int) -> float:
    return (float((counts.astype(np.float64) ** 2).sum()) * (1 << m)) / n - n


def serial(bits: np.ndarray, m: int = 16) -> List[RandomnessTestResult]:
    n = bits.size
    if m < 2 or n < m + 1:
        return [RandomnessTestResult.not_applicable("serial_p1", "m >= 2 and n > m required", m=m),
                RandomnessTestResult.not_applicable("serial_p2", "m >= 2 and n > m required", m=m)]
    counts_m = _window_counts(bits, m)
    counts_m1 = counts_m.reshape(-1, 2).sum(axis=1)
    counts_m2 = counts_m1.reshape(-1, 2).sum(axis=1)
    psi_m = _psi_sq(counts_m, n, m)
    psi_m1 = _psi_sq(counts_m1, n, m - 1)
    psi_m2 = _psi_sq(counts_m2, n, m - 2) if m >= 3 else 0.0
    d1 = psi_m - psi_m1
    d2 = psi_m - 2 * psi_m1 + psi_m2
    p1 = gammaincc(2 ** (m - 2), d1 / 2.0)
    p2 = gammaincc(2 ** (m - 3), d2 / 2.0)
    return [RandomnessTestResult.from_p("serial_p1", p1, m=m, delta_psi=d1),
            RandomnessTestResult.from_p("serial_p2", p2, m=m, delta2_psi=d2)]


def approximate_entropy(bits: np.ndarray, m: int = 10) -> List[RandomnessTestResult]:
    n = bits.size
    if n < m + 2:
        return [RandomnessTestResult.not_applicable(
            "approximate_entropy", "needs more than m+1 bits", m=m)]

    def phi(mm: int) -> float:
        counts = _window_counts(bits, mm)
        nz = counts[counts > 0].astype(np.float64)
        freq = nz / n
        return float((freq * np.log(freq)).sum())

    apen = phi(m) - phi(m + 1)
    chi2 = 2.0 * n * (math.log(2.0) - apen)
    p = gammaincc(2 ** (m - 1), chi2 / 2.0)
    return [RandomnessTestResult.from_p("approximate_entropy", p, m=m,
                                        apen=apen)]


#: battery composition: seven tests, nine p-values
DEFAULT_TESTS = (
    ("monobit", monobit),
    ("block_frequency", block_frequency),
    ("runs", runs),
    ("longest_run", longest_run_of_ones),
    ("cumulative_sums", cumulative_sums),
    ("serial", serial),
    ("approximate_entropy", approximate_entropy),
)

#: names of the p-value items the default battery emits, in order
BATTERY_ITEM_NAMES = (
    "monobit",
    "block_frequency",
    "runs",
    "longest_run",
    "cusum_forward",
    "cusum_reverse",
    "serial_p1",
    "serial_p2",
    "approximate_entropy",
)


def randomness_battery(bits: np.ndarray,
                       tests=None) -> List[RandomnessTestResult]:
    """Run the reduced battery over one bit sequence.

    tests: optional iterable of test names from DEFAULT_TESTS to select a
    subset; defaults to all seven.
    """
    selected = dict(DEFAULT_TESTS)
    if tests is not None:
        unknown = set(tests) - set(selected)
        if unknown:
            raise ValueError("unknown tests: %s" % ", ".join(sorted(unknown)))
        chosen = [(name, fn) for name, fn in DEFAULT_TESTS if name in set(tests)]
    else:
        chosen = list(DEFAULT_TESTS)
    results = []
    for _, fn in chosen:
        results.extend(fn(bits))
    return results
