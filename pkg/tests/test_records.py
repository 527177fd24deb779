from fractions import Fraction

import pytest

from kappaforge.errors import CacheFormatError, DomainError
from kappaforge.records import CACHE_HEADER, ResultRecord, read_cache, write_cache


def sample_records():
    return [
        ResultRecord.make("kappa", 2, [(3, 1)], Fraction(1, 1152)),
        ResultRecord.make("psi", 0, [(0, 3)], Fraction(1)),
        ResultRecord.make("kappa", 2, [(1, 1), (2, 1)], "1/240"),
    ]


class TestResultRecord:
    def test_json_round_trip(self):
        for rec in sample_records():
            assert ResultRecord.from_json(rec.to_json()) == rec

    def test_value_string_round_trips(self):
        rec = ResultRecord.make("kappa", 2, [(1, 3)], Fraction(43, 2880))
        assert rec.value == "43/2880"
        assert rec.rational == Fraction(43, 2880)

    def test_exponents_sorted(self):
        rec = ResultRecord.make("kappa", 2, [(2, 1), (1, 1)], "1/240")
        assert rec.exponents == ((1, 1), (2, 1))
        assert rec.exponents_text() == "1^1 2^1"

    def test_csv_row(self):
        rec = ResultRecord.make("psi", 0, [(0, 3)], "1")
        assert rec.to_csv_row() == "psi,0,0^3,1"

    def test_rejects_bad_kind(self):
        with pytest.raises(DomainError):
            ResultRecord.make("omega", 1, [(1, 1)], "1")

    def test_rejects_bad_value(self):
        with pytest.raises(DomainError):
            ResultRecord.make("psi", 0, [(0, 3)], "one")


class TestCache:
    def test_write_read_round_trip(self, tmp_path):
        path = tmp_path / "numbers.cache"
        records = sample_records()
        write_cache(path, records)
        assert read_cache(path) == sorted(set(records), key=ResultRecord.sort_key)

    def test_header_line(self, tmp_path):
        path = tmp_path / "numbers.cache"
        write_cache(path, sample_records())
        assert path.read_text().splitlines()[0] == CACHE_HEADER

    def test_unknown_version_rejected(self, tmp_path):
        path = tmp_path / "numbers.cache"
        path.write_text("kappa-forge-cache v99\n")
        with pytest.raises(CacheFormatError):
            read_cache(path)

    def test_garbage_rejected(self, tmp_path):
        path = tmp_path / "numbers.cache"
        path.write_text(CACHE_HEADER + "\n{not json\n")
        with pytest.raises(CacheFormatError):
            read_cache(path)

    def test_writes_are_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        write_cache(a, sample_records())
        write_cache(b, list(reversed(sample_records())))
        assert a.read_bytes() == b.read_bytes()
