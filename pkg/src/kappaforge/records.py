"""Result records and the persistent number cache.

A record is one intersection number: kind ("psi" or "kappa"), genus, the
exponent multiset as sorted ``[index, multiplicity]`` pairs, and the value
as an exact rational string.  The cache file format is a fixed header line
followed by one JSON record per line; unknown versions are rejected, never
migrated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .algebra import rational_from_str, rational_to_str
from .errors import CacheFormatError, DomainError

CACHE_HEADER = "kappa-forge-cache v1"

_KINDS = ("psi", "kappa")


@dataclass(frozen=True)
class ResultRecord:
    kind: str
    genus: int
    exponents: tuple
    value: str

    @classmethod
    def make(cls, kind: str, genus: int, exponents, value) -> "ResultRecord":
        if kind not in _KINDS:
            raise DomainError(f"record kind must be one of {_KINDS}, got {kind!r}")
        pairs = tuple(sorted((int(i), int(m)) for i, m in exponents))
        if any(i < 0 or m <= 0 for i, m in pairs):
            raise DomainError(f"bad exponent pairs: {pairs}")
        if isinstance(value, Fraction):
            value = rational_to_str(value)
        rational_from_str(value)  # must round-trip
        return cls(kind, int(genus), pairs, value)

    @property
    def rational(self) -> Fraction:
        return rational_from_str(self.value)

    def sort_key(self) -> tuple:
        weight = sum(i * m for i, m in self.exponents)
        length = sum(m for _, m in self.exponents)
        return (self.kind, self.genus, weight, length, self.exponents)

    # -- serialization

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "genus": self.genus,
                "exponents": [[i, m] for i, m in self.exponents],
                "value": self.value,
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "ResultRecord":
        try:
            data = json.loads(line)
            return cls.make(data["kind"], data["genus"], data["exponents"], data["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CacheFormatError(f"bad record line: {line!r}") from exc

    def exponents_text(self) -> str:
        return " ".join(f"{i}^{m}" for i, m in self.exponents)

    def to_csv_row(self) -> str:
        return f"{self.kind},{self.genus},{self.exponents_text()},{self.value}"

    def to_text(self) -> str:
        mono = self.exponents_text() or "1"
        return f"{self.kind} g={self.genus} [{mono}] = {self.value}"


CSV_HEADER = "kind,genus,exponents,value"


def write_cache(path, records: Iterable[ResultRecord]) -> None:
    path = Path(path)
    lines = [CACHE_HEADER]
    lines.extend(r.to_json() for r in sorted(set(records), key=ResultRecord.sort_key))
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def read_cache(path) -> list:
    path = Path(path)
    text = path.read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines or lines[0].strip() != CACHE_HEADER:
        found = lines[0].strip() if lines else "<empty>"
        raise CacheFormatError(
            f"unsupported cache header {found!r}; expected {CACHE_HEADER!r}"
        )
    return [ResultRecord.from_json(line) for line in lines[1:] if line.strip()]
