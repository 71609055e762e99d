"""Experiment harness: avalanche, randomness battery, throughput.

Every experiment takes an explicit seed and is bit-reproducible at any
thread count; trial randomness comes from counter-based Philox streams
derived per work chunk, so partitioning never changes results.
"""

#: Seed used by every experiment (and the CLI) when none is given.
DEFAULT_SEED = 12345

from .avalanche import AvalancheResult, avalanche_experiment, hamming_distance
from .sp800_22 import (
    ALPHA,
    RandomnessTestResult,
    randomness_battery,
)
from .battery import BatteryReport, battery_over_keystreams, pattern_seeds
from .bench import BenchResult, bench, bench_all

__all__ = [
    "DEFAULT_SEED",
    "ALPHA",
    "AvalancheResult",
    "avalanche_experiment",
    "hamming_distance",
    "RandomnessTestResult",
    "randomness_battery",
    "BatteryReport",
    "battery_over_keystreams",
    "pattern_seeds",
    "BenchResult",
    "bench",
    "bench_all",
]
