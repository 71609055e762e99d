"""Command-line interface.

Subcommands: encrypt, decrypt, keystream, kat, verify-bijection,
avalanche, battery, bench. Exit codes: 0 success, 1 operational failure
(bad input, failed verification), 2 usage error. All experiment
randomness flows from --seed (default vsc.analysis.DEFAULT_SEED), so any
command run twice with the same flags reproduces its output bit for bit
(bench wall-clock timings excepted).
"""

import argparse
import json
import sys

from . import core, kat, permpoly
from .analysis import DEFAULT_SEED
from .analysis.avalanche import avalanche_experiment
from .analysis.battery import SEED_PATTERNS, battery_over_keystreams
from .analysis.bench import bench_all, render_bench_table
from .core import KeyRule, VscError, get_variant

CHUNK_SIZE = 64 * 1024


def _open_in(path: str):
    return sys.stdin.buffer if path == "-" else open(path, "rb")


def _open_out(path: str):
    return sys.stdout.buffer if path == "-" else open(path, "wb")


def _load_key(cfg, key_hex: str) -> bytes:
    key = core.parse_hex_128(key_hex, "key")
    if cfg.key_rule is KeyRule.D_LSB_ZERO and key[15] & 1:
        print("warning: %s uses a 127-bit key; forcing the least significant "
              "bit of the D key word to 0" % cfg.name, file=sys.stderr)
    return key


def _cmd_crypt(args) -> int:
    cfg = get_variant(args.variant)
    key = _load_key(cfg, args.key)
    iv = core.parse_hex_128(args.iv, "iv")
    cipher = core.StreamCipher(cfg, key, iv)
    with _open_in(getattr(args, "in")) as src, _open_out(args.out) as dst:
        while True:
            chunk = src.read(CHUNK_SIZE)
            if not chunk:
                break
            dst.write(cipher.crypt(chunk))
        dst.flush()
    return 0


def _cmd_keystream(args) -> int:
    cfg = get_variant(args.variant)
    key = _load_key(cfg, args.key)
    iv = core.parse_hex_128(args.iv, "iv")
    if args.nbytes < 0:
        raise VscError("--nbytes must be >= 0")
    cipher = core.StreamCipher(cfg, key, iv)
    remaining = args.nbytes
    with _open_out(args.out) as dst:
        while remaining > 0:
            step = min(remaining, CHUNK_SIZE)
            dst.write(cipher.crypt(bytes(step)))
            remaining -= step
        dst.flush()
    return 0


def _cmd_kat(args) -> int:
    mismatches, total = kat.verify_kat_file(args.file)
    for rec, actual in mismatches:
        print("MISMATCH %s: expected %s got %s"
              % (rec.to_line(), rec.keystream.hex(), actual.hex()))
    print("%d/%d records match" % (total - len(mismatches), total))
    return 1 if mismatches else 0


def _cmd_verify_bijection(args) -> int:
    if args.rule == "scaled-round":
        if not 1 <= args.n <= 3:
            raise VscError("scaled-round supports --n 1..3")
        report = permpoly.scaled_round_check(args.n)
    else:
        rule = (permpoly.MapRule.CLEAR2_SET1 if args.rule == "thm1"
                else permpoly.MapRule.AFFINE_4X_PLUS_1)
        vmap = permpoly.GenericVectorMap(rule, args.n, args.m)
        report = permpoly.bijectivity_check(vmap, args.restricted)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_text())
    return 0 if report.is_bijection else 1


def _cmd_avalanche(args) -> int:
    cfg = get_variant(args.variant)
    result = avalanche_experiment(
        cfg, args.trials, args.seed, threads=args.threads,
        exhaustive_positions=args.exhaustive_positions,
        collect_histogram=args.histogram,
        keep_distances=args.csv is not None,
    )
    if args.csv:
        result.write_csv(args.csv)
    if args.format == "json":
        print(json.dumps(result.to_dict(), indent=2))
    else:
        print(result.to_text())
    return 0


def _cmd_battery(args) -> int:
    cfg = get_variant(args.variant)
    if args.set == "random" and args.sequences < 0:
        raise VscError("--sequences must be >= 0")
    report = battery_over_keystreams(
        cfg, args.set, args.sequences, bits_per_sequence=args.bits,
        seed=args.seed, threads=args.threads)
    if args.csv:
        report.write_csv(args.csv)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_text())
    return 0 if report.all_within_interval else 1


def _cmd_bench(args) -> int:
    results = bench_all(n_bytes=args.nbytes, repetitions=args.reps,
                        engine=args.engine,
                        variants=args.variant or None)
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in results], indent=2))
    else:
        print(render_bench_table(results))
    return 0


def _add_cipher_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", required=True,
                   help="vsc128, vsc20 or vsc21")
    p.add_argument("--key", required=True, metavar="HEX32",
                   help="128-bit key, 32 hex digits")
    p.add_argument("--iv", required=True, metavar="HEX32",
                   help="128-bit initial vector, 32 hex digits")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vsc",
        description="Vector Stream Cipher tools: encryption, keystream "
                    "generation, known-answer verification, bijectivity "
                    "sweeps and statistical experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("encrypt", "decrypt"):
        p = sub.add_parser(name, help="XOR a file with the keystream "
                                      "(encryption and decryption are the "
                                      "same operation)")
        _add_cipher_flags(p)
        p.add_argument("--in", required=True, metavar="PATH",
                       help="input file, - for stdin")
        p.add_argument("--out", required=True, metavar="PATH",
                       help="output file, - for stdout")
        p.set_defaults(func=_cmd_crypt)

    p = sub.add_parser("keystream", help="write raw keystream bytes")
    _add_cipher_flags(p)
    p.add_argument("--nbytes", type=int, required=True)
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=_cmd_keystream)

    p = sub.add_parser("kat", help="verify a known-answer vector file")
    p.add_argument("--file", required=True, metavar="PATH")
    p.set_defaults(func=_cmd_kat)

    p = sub.add_parser("verify-bijection",
                       help="exhaustive bijectivity check of the coupled "
                            "quadratic maps or the scaled cipher round")
    p.add_argument("--rule", required=True,
                   choices=["thm1", "thm2", "scaled-round"])
    p.add_argument("--n", type=int, required=True, help="bit width per word")
    p.add_argument("--m", type=int, default=2, help="vector length")
    p.add_argument("--restricted", action="store_true",
                   help="exclude all-odd tuples from the domain")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=_cmd_verify_bijection)

    p = sub.add_parser("avalanche",
                       help="preprocessing avalanche experiment")
    p.add_argument("--variant", required=True, help="vsc20 or vsc21")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--exhaustive-positions", action="store_true",
                   help="cycle the flipped bit over all 128 positions")
    p.add_argument("--histogram", action="store_true",
                   help="collect per-output-bit flip counts")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--csv", metavar="PATH",
                   help="dump raw per-trial distances as CSV")
    p.set_defaults(func=_cmd_avalanche)

    p = sub.add_parser("battery",
                       help="randomness battery over keystream sequences")
    p.add_argument("--variant", required=True)
    p.add_argument("--set", default="random",
                   choices=["random"] + list(SEED_PATTERNS))
    p.add_argument("--sequences", type=int, default=100,
                   help="sequence count for the random set (pattern sets "
                        "always use every condition)")
    p.add_argument("--bits", type=int, default=1_000_000,
                   help="bits per sequence")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--csv", metavar="PATH",
                   help="dump per-sequence p-values as CSV")
    p.set_defaults(func=_cmd_battery)

    p = sub.add_parser("bench", help="steady-state keystream throughput")
    p.add_argument("--variant", action="append",
                   help="repeatable; default all three")
    p.add_argument("--nbytes", type=int, default=64 * 1024 * 1024)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--engine", choices=["auto", "c", "numba"], default="auto")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VscError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print("error: file not found: %s" % exc.filename, file=sys.stderr)
        return 1
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
