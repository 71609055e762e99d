"""Known-answer test vectors: interchange format, generation, verification.

A vector file is line-oriented text; ``#`` starts a comment and blank
lines are ignored. Each record is five whitespace-separated fields:

    variant  key  iv  block_index  keystream

with variant one of vsc128/vsc20/vsc21, key/iv/keystream as 32 lowercase
hex digits (the convention from vsc.core), and a 0-based block index.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Tuple

from .core import VariantConfig, VscError, get_variant, keystream, parse_hex_128


@dataclass(frozen=True)
class KatRecord:
    variant: str
    key: bytes
    iv: bytes
    block_index: int
    keystream: bytes

    def to_line(self) -> str:
        return "%s %s %s %d %s" % (
            self.variant, self.key.hex(), self.iv.hex(),
            self.block_index, self.keystream.hex())


def parse_kat_file(path) -> List[KatRecord]:
    records = []
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5:
            raise VscError("%s:%d: expected 5 fields, got %d"
                           % (path, lineno, len(fields)))
        variant, key_hex, iv_hex, index_s, ks_hex = fields
        cfg = get_variant(variant)
        try:
            index = int(index_s)
        except ValueError:
            raise VscError("%s:%d: block_index %r is not an integer"
                           % (path, lineno, index_s)) from None
        if index < 0:
            raise VscError("%s:%d: block_index must be >= 0" % (path, lineno))
        records.append(KatRecord(
            cfg.name,
            parse_hex_128(key_hex, "key"),
            parse_hex_128(iv_hex, "iv"),
            index,
            parse_hex_128(ks_hex, "keystream"),
        ))
    return records


def write_kat_file(path, records: Iterable[KatRecord], header: str = "") -> None:
    lines = []
    if header:
        lines.extend("# " + h for h in header.splitlines())
    lines.extend(r.to_line() for r in records)
    Path(path).write_text("\n".join(lines) + "\n")


def generate_records(cfg: VariantConfig, pairs: Iterable[Tuple[bytes, bytes]],
                     n_blocks: int) -> List[KatRecord]:
    """Compute the first n_blocks keystream blocks for each (key, iv) pair."""
    records = []
    for key, iv in pairs:
        stream = keystream(cfg, key, iv, 16 * n_blocks)
        for i in range(n_blocks):
            records.append(KatRecord(cfg.name, key, iv, i,
                                     stream[16 * i: 16 * (i + 1)]))
    return records


def verify_records(records: List[KatRecord]):
    """Check every record against this implementation.

    Returns (mismatches, total) where mismatches is a list of
    (record, actual_keystream_bytes).
    """
    mismatches = []
    by_stream = {}
    for rec in records:
        key = (rec.variant, rec.key, rec.iv)
        by_stream.setdefault(key, []).append(rec)
    for (variant, key, iv), recs in by_stream.items():
        cfg = get_variant(variant)
        depth = max(r.block_index for r in recs) + 1
        stream = keystream(cfg, key, iv, 16 * depth)
        for rec in recs:
            actual = stream[16 * rec.block_index: 16 * (rec.block_index + 1)]
            if actual != rec.keystream:
                mismatches.append((rec, actual))
    return mismatches, len(records)


def verify_kat_file(path):
    return verify_records(parse_kat_file(path))
