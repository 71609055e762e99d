"""Avalanche experiment on the VSC 2.0 / 2.1 preprocessing.

Per trial: draw a random 128-bit IV, flip one input bit, preprocess both,
and count differing bits in the 128-bit (X,Y,Z,W) outputs. A sound
preprocessing behaves like a random function, so distances concentrate at
64 with binomial(128, 1/2) spread.

Bit positions follow the interchange convention: position p of a 128-bit
value is bit 7-(p%8) of byte p//8, i.e. position 0 is the most significant
bit of the first byte.
"""

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..batch import preprocess_batch
from ..core import UnsupportedVariantError, VariantConfig

_CHUNK = 8192


def hamming_distance(a: bytes, b: bytes) -> int:
    """Number of differing bits between two equal-length octet strings."""
    if len(a) != len(b):
        raise ValueError("length mismatch: %d vs %d bytes" % (len(a), len(b)))
    return int(np.bitwise_count(
        np.frombuffer(a, dtype=np.uint8) ^ np.frombuffer(b, dtype=np.uint8)
    ).sum())


@dataclass
class AvalancheResult:
    variant: str
    trials: int
    mean_distance: float
    min_distance: int
    max_distance: int
    variance: float
    seed: int
    exhaustive_positions: bool
    #: how often each output bit position flipped, when collected
    flip_histogram: Optional[np.ndarray] = field(default=None, repr=False)
    #: raw per-trial distances, kept for CSV dumps
    distances: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        d = {
            "variant": self.variant,
            "trials": self.trials,
            "mean_distance": self.mean_distance,
            "min_distance": self.min_distance,
            "max_distance": self.max_distance,
            "variance": self.variance,
            "seed": self.seed,
            "exhaustive_positions": self.exhaustive_positions,
        }
        if self.flip_histogram is not None:
            d["flip_histogram"] = [int(x) for x in self.flip_histogram]
        return d

    def to_text(self) -> str:
        rows = [
            ("variant", self.variant),
            ("trials", str(self.trials)),
            ("average Hamming distance", "%.6f" % self.mean_distance),
            ("min / max", "%d / %d" % (self.min_distance, self.max_distance)),
            ("sample variance", "%.3f" % self.variance),
            ("seed", str(self.seed)),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join("%-*s  %s" % (width, k, v) for k, v in rows)

    def write_csv(self, path) -> None:
        if self.distances is None:
            raise ValueError("distances were not collected")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["trial", "hamming_distance"])
            writer.writerows(enumerate(int(d) for d in self.distances))


def _run_chunk(cfg: VariantConfig, seed: int, chunk_index: int, count: int,
               first_trial: int, exhaustive: bool, want_histogram: bool):
    rng = np.random.Generator(np.random.Philox(key=seed).jumped(chunk_index))
    ivs = rng.integers(0, 1 << 32, size=(4, count), dtype=np.uint32)
    if exhaustive:
        positions = (first_trial + np.arange(count)) % 128
    else:
        positions = rng.integers(0, 128, size=count)
    flip = np.zeros((4, count), dtype=np.uint32)
    flip[positions // 32, np.arange(count)] = np.uint32(1) << (
        31 - (positions % 32)
    ).astype(np.uint32)

    out1 = preprocess_batch(cfg, ivs)[4:8]
    out2 = preprocess_batch(cfg, ivs ^ flip)[4:8]
    diff = out1 ^ out2
    distances = np.bitwise_count(diff).sum(axis=0, dtype=np.int64)

    histogram = None
    if want_histogram:
        histogram = np.zeros(128, dtype=np.int64)
        for word in range(4):
            for bit in range(32):
                histogram[word * 32 + (31 - bit)] = (
                    (diff[word] >> np.uint32(bit)) & np.uint32(1)
                ).sum()
    return distances, histogram


def avalanche_experiment(cfg: VariantConfig, trials: int, seed: int,
                         threads: int = 1, exhaustive_positions: bool = False,
                         collect_histogram: bool = False,
                         keep_distances: bool = False) -> AvalancheResult:
    """Run the preprocessing avalanche experiment.

    Deterministic for a given seed regardless of threads; trials are
    partitioned into fixed-size chunks with independent Philox streams.
    exhaustive_positions cycles the flipped bit deterministically over all
    128 positions instead of sampling it.
    """
    if cfg.preprocessing_rounds == 0:
        raise UnsupportedVariantError(
            "%s has no preprocessing to measure" % cfg.name)
    if trials < 1:
        raise ValueError("trials must be >= 1")

    chunks = []
    start = 0
    index = 0
    while start < trials:
        count = min(_CHUNK, trials - start)
        chunks.append((index, start, count))
        index += 1
        start += count

    def work(args):
        idx, first, count = args
        return _run_chunk(cfg, seed, idx, count, first,
                          exhaustive_positions, collect_histogram)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, chunks))
    else:
        results = [work(c) for c in chunks]

    all_distances = np.concatenate([r[0] for r in results])
    histogram = None
    if collect_histogram:
        histogram = np.sum([r[1] for r in results], axis=0)

    return AvalancheResult(
        variant=cfg.name,
        trials=trials,
        mean_distance=float(all_distances.mean()),
        min_distance=int(all_distances.min()),
        max_distance=int(all_distances.max()),
        variance=float(all_distances.var(ddof=1)) if trials > 1 else 0.0,
        seed=seed,
        exhaustive_positions=exhaustive_positions,
        flip_histogram=histogram,
        distances=all_distances if keep_distances else None,
    )
