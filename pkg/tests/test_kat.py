"""Known-answer vector file format and verification."""

import pytest

from vsc import kat
from vsc.core import VSC21, VscError

VECTORS = "tests/vectors/vsc_kat.txt"


class TestFrozenVectors:
    def test_file_shape(self):
        records = kat.parse_kat_file(VECTORS)
        assert len(records) == 90
        variants = {r.variant for r in records}
        assert variants == {"vsc128", "vsc20", "vsc21"}
        pairs = {(r.variant, r.key, r.iv) for r in records}
        assert len(pairs) == 30  # 10 (key, iv) pairs per variant
        assert {r.block_index for r in records} == {0, 1, 2}

    def test_implementation_matches_all_records(self):
        mismatches, total = kat.verify_kat_file(VECTORS)
        assert total == 90
        assert mismatches == []


class TestFormat:
    def test_roundtrip(self, tmp_path):
        records = kat.generate_records(
            VSC21, [(b"\x01" * 16, b"\x02" * 16)], 3)
        path = tmp_path / "v.txt"
        kat.write_kat_file(path, records, header="test vectors")
        parsed = kat.parse_kat_file(path)
        assert parsed == records
        mismatches, total = kat.verify_kat_file(path)
        assert total == 3 and not mismatches

    def test_tampered_record_detected(self, tmp_path):
        records = kat.generate_records(VSC21, [(b"\x01" * 16, b"\x02" * 16)], 2)
        bad = kat.KatRecord(records[1].variant, records[1].key,
                            records[1].iv, records[1].block_index,
                            bytes(16))
        path = tmp_path / "v.txt"
        kat.write_kat_file(path, [records[0], bad])
        mismatches, total = kat.verify_kat_file(path)
        assert total == 2
        assert len(mismatches) == 1
        rec, actual = mismatches[0]
        assert rec == bad and actual == records[1].keystream

    @pytest.mark.parametrize("line,fragment", [
        ("vsc21 00 11 0", "expected 5 fields"),
        ("vsc21 " + "0" * 32 + " " + "1" * 32 + " x " + "2" * 32,
         "not an integer"),
        ("vsc21 " + "0" * 32 + " " + "1" * 32 + " -1 " + "2" * 32,
         "must be >= 0"),
        ("vsc21 " + "g" * 32 + " " + "1" * 32 + " 0 " + "2" * 32, "non-hex"),
        ("vsc21 " + "0" * 30 + " " + "1" * 32 + " 0 " + "2" * 32,
         "32 hex digits"),
        ("vsc99 " + "0" * 32 + " " + "1" * 32 + " 0 " + "2" * 32,
         "unknown variant"),
    ])
    def test_malformed_lines(self, tmp_path, line, fragment):
        path = tmp_path / "bad.txt"
        path.write_text("# comment\n\n" + line + "\n")
        with pytest.raises(VscError, match=fragment):
            kat.parse_kat_file(path)

    def test_comments_and_blanks_ignored(self, tmp_path):
        records = kat.generate_records(VSC21, [(bytes(16), bytes(16))], 1)
        path = tmp_path / "v.txt"
        path.write_text("# header\n\n%s  # trailing comment\n\n"
                        % records[0].to_line())
        assert kat.parse_kat_file(path) == records
