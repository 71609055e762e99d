"""Randomness battery over VSC keystreams.

Generates sequences of keystream bits for a set of (key, iv) conditions --
either randomly seeded or the special low-Hamming-weight patterns -- runs
the reduced battery on each, and aggregates pass proportions with the
SP800-22 proportion interval (1-alpha) +/- 3*sqrt(alpha*(1-alpha)/N).
"""

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import sqrt
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..batch import keystream_bytes_batch
from ..core import KeyRule, VariantConfig
from .sp800_22 import ALPHA, BATTERY_ITEM_NAMES, bits_from_bytes, randomness_battery

#: bit position (interchange convention, over key||iv) of the least
#: significant bit of the D key word: last bit of key byte 15
D_LSB_POSITION = 127

SEED_PATTERNS = ("single-one", "single-zero-paired")


def _with_bit(data: bytearray, position: int, value: int) -> None:
    byte, bit = divmod(position, 8)
    mask = 1 << (7 - bit)
    if value:
        data[byte] |= mask
    else:
        data[byte] &= mask ^ 0xFF


def pattern_seeds(kind: str, cfg: VariantConfig) -> List[Tuple[bytes, bytes]]:
    """Special 256-bit initial conditions (key || iv) from the battery sets.

    single-one: every condition with exactly one 1 bit; the condition whose
    1 sits on the D key word's least significant bit is dropped for VSC 2.0
    (its key rule pins that bit to 0), leaving 255 of 256.

    single-zero-paired: all-ones conditions with exactly two 0 bits, one of
    them always the D key word's least significant bit -- 255 conditions.
    """
    if kind not in SEED_PATTERNS:
        raise ValueError("unknown seed pattern %r (expected %s)"
                         % (kind, " or ".join(SEED_PATTERNS)))
    conditions = []
    if kind == "single-one":
        for pos in range(256):
            if pos == D_LSB_POSITION and cfg.key_rule is KeyRule.D_LSB_ZERO:
                continue
            cond = bytearray(32)
            _with_bit(cond, pos, 1)
            conditions.append((bytes(cond[:16]), bytes(cond[16:])))
    else:
        for pos in range(256):
            if pos == D_LSB_POSITION:
                continue
            cond = bytearray(b"\xff" * 32)
            _with_bit(cond, D_LSB_POSITION, 0)
            _with_bit(cond, pos, 0)
            conditions.append((bytes(cond[:16]), bytes(cond[16:])))
    return conditions


def random_seeds(n: int, seed: int) -> List[Tuple[bytes, bytes]]:
    """n (key, iv) pairs drawn from a Philox stream keyed by seed."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    raw = rng.integers(0, 256, size=(n, 32), dtype=np.uint8, endpoint=False)
    return [(row[:16].tobytes(), row[16:].tobytes()) for row in raw]


@dataclass
class ItemSummary:
    item: str
    applicable: int
    passed: int

    @property
    def proportion(self) -> Optional[float]:
        if self.applicable == 0:
            return None
        return self.passed / self.applicable

    def interval(self) -> Optional[Tuple[float, float]]:
        if self.applicable == 0:
            return None
        half = 3.0 * sqrt(ALPHA * (1.0 - ALPHA) / self.applicable)
        return (1.0 - ALPHA) - half, min((1.0 - ALPHA) + half, 1.0)

    @property
    def within_interval(self) -> Optional[bool]:
        iv = self.interval()
        if iv is None:
            return None
        lo, hi = iv
        return lo <= self.proportion <= hi


@dataclass
class BatteryReport:
    variant: str
    set_spec: str
    sequences: int
    bits_per_sequence: int
    seed: Optional[int]
    alpha: float
    items: Dict[str, ItemSummary]
    #: per-sequence p-values, row per sequence, column per battery item
    p_values: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def all_within_interval(self) -> bool:
        summaries = [s.within_interval for s in self.items.values()]
        return all(s is not False for s in summaries)

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "set_spec": self.set_spec,
            "sequences": self.sequences,
            "bits_per_sequence": self.bits_per_sequence,
            "seed": self.seed,
            "alpha": self.alpha,
            "items": {
                name: {
                    "applicable": s.applicable,
                    "passed": s.passed,
                    "proportion": s.proportion,
                    "interval": s.interval(),
                    "within_interval": s.within_interval,
                }
                for name, s in self.items.items()
            },
            "all_within_interval": self.all_within_interval,
        }

    def to_text(self) -> str:
        header = "%s  set=%s  sequences=%d  bits=%d  alpha=%.2f" % (
            self.variant, self.set_spec, self.sequences,
            self.bits_per_sequence, self.alpha)
        lines = [header, ""]
        name_w = max([len(n) for n in self.items] + [9])
        lines.append("%-*s  %7s  %10s  %19s  %s" % (
            name_w, "test item", "passed", "proportion", "acceptance interval", "ok"))
        for name, s in self.items.items():
            if s.applicable == 0:
                lines.append("%-*s  %7s  %10s  %19s  %s"
                             % (name_w, name, "-", "n/a", "-", "-"))
                continue
            lo, hi = s.interval()
            lines.append("%-*s  %3d/%-3d  %10.4f  [%.4f, %.4f]  %s" % (
                name_w, name, s.passed, s.applicable, s.proportion,
                lo, hi, "yes" if s.within_interval else "NO"))
        return "\n".join(lines)

    def write_csv(self, path) -> None:
        if self.p_values is None:
            raise ValueError("per-sequence p-values were not collected")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["sequence"] + list(BATTERY_ITEM_NAMES))
            for i, row in enumerate(self.p_values):
                writer.writerow([i] + ["" if np.isnan(p) else "%.6f" % p
                                       for p in row])


def battery_over_keystreams(cfg: VariantConfig, set_spec: str,
                            n_sequences: int,
                            bits_per_sequence: int = 1_000_000,
                            seed: Optional[int] = None,
                            threads: int = 1,
                            keep_p_values: bool = True) -> BatteryReport:
    """Generate keystreams for a seed set and run the battery on each.

    set_spec is "random" (n_sequences random pairs from the seed) or one of
    the pattern names, for which n_sequences is ignored and the full
    pattern set is used. Deterministic for a given seed at any thread
    count.
    """
    if set_spec == "random":
        if seed is None:
            raise ValueError("random set requires a seed")
        pairs = random_seeds(n_sequences, seed)
    else:
        pairs = pattern_seeds(set_spec, cfg)

    n = len(pairs)
    items = {name: ItemSummary(name, 0, 0) for name in BATTERY_ITEM_NAMES}
    if n == 0:
        return BatteryReport(cfg.name, set_spec, 0, bits_per_sequence, seed,
                             ALPHA, items,
                             np.zeros((0, len(BATTERY_ITEM_NAMES))))

    keys = np.frombuffer(b"".join(k for k, _ in pairs),
                         dtype=np.uint8).reshape(n, 16)
    ivs = np.frombuffer(b"".join(v for _, v in pairs),
                        dtype=np.uint8).reshape(n, 16)
    n_bytes = -(-bits_per_sequence // 8)
    streams = keystream_bytes_batch(cfg, keys, ivs, n_bytes)

    def analyze(lane: int):
        bits = bits_from_bytes(streams[lane].tobytes(), bits_per_sequence)
        return randomness_battery(bits)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_seq = list(pool.map(analyze, range(n)))
    else:
        per_seq = [analyze(lane) for lane in range(n)]

    p_matrix = np.full((n, len(BATTERY_ITEM_NAMES)), np.nan)
    for row, results in enumerate(per_seq):
        assert len(results) == len(BATTERY_ITEM_NAMES)
        for col, res in enumerate(results):
            name = BATTERY_ITEM_NAMES[col]
            assert res.test_name == name
            if not res.applicable:
                continue
            items[name].applicable += 1
            items[name].passed += bool(res.passed)
            p_matrix[row, col] = res.p_value

    return BatteryReport(cfg.name, set_spec, n, bits_per_sequence, seed,
                         ALPHA, items, p_matrix if keep_p_values else None)
