"""Steady-state keystream throughput measurement.

The measured engine is a straight-line C transcription of the round
(vsc/_kernels.c) compiled on demand with the system C compiler at -O3 and
loaded through ctypes -- the classic optimized build for this cipher
family. Where no C compiler is available the numba kernels stand in.
Either engine is verified bit-exact against the pure-Python rounds before
any timing is taken.

Timing covers keystream block generation only; state setup (including
preprocessing) is excluded and its latency reported separately. Best-of-N
wall times from a monotonic clock; single stream, single thread.
"""

import ctypes
import hashlib
import os
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from ..core import VariantConfig, VARIANTS, init_state, keystream

_KERNEL_SOURCE = Path(__file__).resolve().parent.parent / "_kernels.c"
_VERIFY_BLOCKS = 64


class _CKernels:
    def __init__(self, lib, compiler):
        self._lib = lib
        self.compiler = compiler
        for name in ("vsc128_blocks", "vsc20_blocks", "vsc21_blocks"):
            fn = getattr(lib, name)
            fn.argtypes = [
                ctypes.POINTER(ctypes.c_uint32),
                ctypes.POINTER(ctypes.c_uint32),
                ctypes.c_long,
            ]
            fn.restype = None

    def run(self, cfg: VariantConfig, state: np.ndarray, out: np.ndarray,
            nblocks: int) -> None:
        fn = getattr(self._lib, "%s_blocks" % cfg.name)
        fn(state.ctypes.data_as(ctypes.POINTER(ctypes.c_uint32)),
           out.ctypes.data_as(ctypes.POINTER(ctypes.c_uint32)),
           nblocks)


def _find_compiler() -> Optional[str]:
    for cc in ("gcc", "cc", "clang"):
        path = shutil.which(cc)
        if path:
            return path
    return None


def _compile_c_kernels() -> Optional[_CKernels]:
    cc = _find_compiler()
    if cc is None or not _KERNEL_SOURCE.exists():
        return None
    source = _KERNEL_SOURCE.read_bytes()
    tag = hashlib.sha256(source + cc.encode()).hexdigest()[:16]
    cache_dir = Path(os.environ.get("XDG_CACHE_HOME",
                                    Path.home() / ".cache")) / "vsc"
    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
    except OSError:
        cache_dir = Path(tempfile.gettempdir())
    lib_path = cache_dir / ("vsc_kernels_%s.so" % tag)
    if not lib_path.exists():
        with tempfile.TemporaryDirectory() as tmp:
            tmp_lib = Path(tmp) / lib_path.name
            cmd = [cc, "-O3", "-fPIC", "-shared", "-o", str(tmp_lib),
                   str(_KERNEL_SOURCE)]
            try:
                subprocess.run(cmd, check=True, capture_output=True,
                               timeout=120)
            except (subprocess.SubprocessError, OSError):
                return None
            shutil.move(str(tmp_lib), lib_path)
    try:
        return _CKernels(ctypes.CDLL(str(lib_path)), cc)
    except OSError:
        return None


_c_kernels_cache = None
_c_kernels_tried = False


def c_kernels() -> Optional[_CKernels]:
    global _c_kernels_cache, _c_kernels_tried
    if not _c_kernels_tried:
        _c_kernels_cache = _compile_c_kernels()
        _c_kernels_tried = True
    return _c_kernels_cache


@dataclass
class BenchResult:
    variant: str
    engine: str
    bytes_processed: int
    elapsed_seconds: float
    throughput_mbps: float
    repetitions: int
    all_elapsed: List[float]
    preprocess_latency_seconds: float

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "engine": self.engine,
            "bytes_processed": self.bytes_processed,
            "elapsed_seconds": self.elapsed_seconds,
            "throughput_mbps": self.throughput_mbps,
            "repetitions": self.repetitions,
            "all_elapsed": self.all_elapsed,
            "preprocess_latency_seconds": self.preprocess_latency_seconds,
        }


def render_bench_table(results: List["BenchResult"]) -> str:
    lines = ["%-10s  %12s  %14s  %22s" % (
        "algorithm", "speed(Mbps)", "best elapsed", "preprocess latency")]
    for r in results:
        lines.append("%-10s  %12.2f  %12.4fs  %20.1fus" % (
            r.variant, r.throughput_mbps, r.elapsed_seconds,
            r.preprocess_latency_seconds * 1e6))
    lines.append("")
    lines.append("engine: %s, %d bytes per run, best of %d"
                 % (results[0].engine, results[0].bytes_processed,
                    results[0].repetitions))
    return "\n".join(lines)


def _verify_engine(cfg: VariantConfig, runner, engine: str) -> None:
    key = bytes(range(16))
    iv = bytes(range(16, 32))
    state = np.array(init_state(cfg, key, iv), dtype=np.uint32)
    out = np.empty(4 * _VERIFY_BLOCKS, dtype=np.uint32)
    runner(cfg, state, out, _VERIFY_BLOCKS)
    got = out.astype(">u4").tobytes()
    want = keystream(cfg, key, iv, 16 * _VERIFY_BLOCKS, engine="pure")
    if got != want:
        raise AssertionError(
            "%s bench engine is not bit-exact for %s" % (engine, cfg.name))


def _measure_preprocess_latency(cfg: VariantConfig) -> float:
    if cfg.preprocessing_rounds == 0:
        return 0.0
    key = bytes(16)
    iv = bytes(range(16))
    reps = 50
    init_state(cfg, key, iv)
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        init_state(cfg, key, iv)
        best = min(best, time.perf_counter() - t0)
    return best


def bench(cfg: VariantConfig, n_bytes: int = 64 * 1024 * 1024,
          repetitions: int = 5, engine: str = "auto") -> BenchResult:
    """Measure steady-state keystream throughput for one variant.

    Generates n_bytes of keystream per repetition from a chained state and
    reports the best repetition. engine: "c" (compile vsc/_kernels.c, the
    default when a compiler exists), "numba", or "auto".
    """
    if n_bytes < 16:
        raise ValueError("n_bytes must be at least one block")
    ck = c_kernels() if engine in ("auto", "c") else None
    if engine == "c" and ck is None:
        raise RuntimeError("no C compiler available for the C bench engine")

    if ck is not None:
        engine_name = "c(%s -O3)" % Path(ck.compiler).name
        runner = ck.run
    else:
        from .. import fastgen

        engine_name = "numba"

        def runner(cfg_, state, out, nblocks):
            fastgen.kernel_for(cfg_)(state, out, nblocks)

    _verify_engine(cfg, runner, engine_name)

    nblocks = n_bytes // 16
    state = np.array(init_state(cfg, b"\x01" * 16, b"\x02" * 16),
                     dtype=np.uint32)
    out = np.empty(4 * nblocks, dtype=np.uint32)
    runner(cfg, state, out, min(nblocks, 4096))  # warm caches / JIT
    elapsed = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        runner(cfg, state, out, nblocks)
        elapsed.append(time.perf_counter() - t0)
    best = min(elapsed)
    return BenchResult(
        variant=cfg.name,
        engine=engine_name,
        bytes_processed=nblocks * 16,
        elapsed_seconds=best,
        throughput_mbps=nblocks * 16 * 8 / best / 1e6,
        repetitions=repetitions,
        all_elapsed=elapsed,
        preprocess_latency_seconds=_measure_preprocess_latency(cfg),
    )


def bench_all(n_bytes: int = 64 * 1024 * 1024, repetitions: int = 5,
              engine: str = "auto",
              variants: Optional[List[str]] = None) -> List[BenchResult]:
    names = variants if variants is not None else list(VARIANTS)
    return [bench(VARIANTS[name], n_bytes, repetitions, engine)
            for name in names]
