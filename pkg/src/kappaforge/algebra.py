"""Exact sparse polynomial algebra over countably indexed variables.

Everything is computed over arbitrary-precision rationals; no rounding ever
occurs.  Polynomials are sparse mappings from monomials to coefficients,
carrying an optional *weight* cap (the grading weight of ``x_i`` is ``i`` for
index-weighted families, or 1 for degree-graded families), an optional total
degree cap, and an optional cap on the exponent of the index-0 variable.
Truncation is part of the algebra's contract: products silently drop terms
exceeding a cap.

:class:`ExpPoly` extends the algebra by an integer-graded family of sectors.
A sector ``d`` holds the polynomial multiplying ``e^{d p_0}`` (or ``u^d``,
depending on the variable family); taking the partial derivative in the
index-0 variable obeys the product rule against the exponential prefactor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import AlphabetMismatchError, DomainError

ExactRational = Fraction

Scalar = Union[int, Fraction]

#: A monomial: sorted tuple of (variable index, positive exponent) pairs.
Mono = tuple
UNIT: Mono = ()


def rational_to_str(x: Fraction) -> str:
    """Serialize a rational as ``"a/b"``, omitting the denominator when 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(text: str) -> Fraction:
    """Parse the ``"a/b"`` (or plain integer) form produced by
    :func:`rational_to_str`."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational: {text!r}") from exc


def odd_double_factorial(m: int) -> int:
    """Return ``m!! = m (m-2) (m-4) ... 1`` for odd ``m >= -1``.

    The empty product convention gives ``(-1)!! = 1``.
    """
    if m < -1 or m % 2 == 0:
        raise DomainError(f"double factorial needs an odd integer >= -1, got {m}")
    result = 1
    while m > 1:
        result *= m
        m -= 2
    return result


@dataclass(frozen=True)
class Alphabet:
    """A variable family tag.

    ``index_weighted`` selects the grading: weight(x_i) = i when true, else
    every variable has weight 1 (grading by total degree).  For families with
    ``sector_coupled`` set, the index-0 variable also appears as the sector
    exponential of :class:`ExpPoly`, and derivatives in it pick up the sector
    factor.
    """

    name: str
    index_weighted: bool
    sector_coupled: bool

    def weight_of(self, index: int, exp: int) -> int:
        return index * exp if self.index_weighted else exp


P_VARS = Alphabet("p", index_weighted=True, sector_coupled=True)
T_VARS = Alphabet("t", index_weighted=True, sector_coupled=False)
S_VARS = Alphabet("s", index_weighted=False, sector_coupled=False)
X_VARS = Alphabet("x", index_weighted=True, sector_coupled=False)


# ---------------------------------------------------------------------------
# monomials


def make_mono(spec: Union[Mapping[int, int], Iterable[tuple]]) -> Mono:
    """Canonicalize a monomial from a mapping or iterable of (index, exp)."""
    acc: dict = {}
    items = spec.items() if isinstance(spec, Mapping) else spec
    for index, exp in items:
        if index < 0:
            raise DomainError(f"variable index must be >= 0, got {index}")
        if exp < 0:
            raise DomainError(f"exponent must be >= 0, got {exp}")
        if exp:
            acc[index] = acc.get(index, 0) + exp
    return tuple(sorted(acc.items()))


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for index, exp in b:
        acc[index] = acc.get(index, 0) + exp
    return tuple(sorted(acc.items()))


def mono_quotient(m: Mono, d: Mono) -> Mono | None:
    """Return ``m / d`` or None when ``d`` does not divide ``m``."""
    if not d:
        return m
    acc = dict(m)
    for index, exp in d:
        have = acc.get(index, 0)
        if have < exp:
            return None
        if have == exp:
            del acc[index]
        else:
            acc[index] = have - exp
    return tuple(sorted(acc.items()))


def mono_exp(m: Mono, index: int) -> int:
    for i, e in m:
        if i == index:
            return e
    return 0


def mono_mul_var(m: Mono, index: int, k: int = 1) -> Mono:
    """Multiply by ``x_index^k`` (k >= 1)."""
    acc = dict(m)
    acc[index] = acc.get(index, 0) + k
    return tuple(sorted(acc.items()))


def mono_weight(m: Mono, alphabet: Alphabet) -> int:
    if alphabet.index_weighted:
        return sum(i * e for i, e in m)
    return sum(e for _, e in m)


def mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def mono_splits(m: Mono) -> Iterator[tuple]:
    """Yield every ordered pair (a, b) with a * b == m."""
    if not m:
        yield UNIT, UNIT
        return
    n = len(m)
    indices = [i for i, _ in m]
    exps = [e for _, e in m]
    pick = [0] * n
    while True:
        a = tuple((indices[i], pick[i]) for i in range(n) if pick[i])
        b = tuple((indices[i], exps[i] - pick[i]) for i in range(n) if exps[i] - pick[i])
        yield a, b
        j = 0
        while j < n and pick[j] == exps[j]:
            pick[j] = 0
            j += 1
        if j == n:
            return
        pick[j] += 1


def mono_order_key(m: Mono, alphabet: Alphabet) -> tuple:
    """Canonical ordering: weight, then length, then lex on (index, exp)."""
    return (mono_weight(m, alphabet), mono_degree(m), m)


def mono_str(m: Mono, alphabet: Alphabet) -> str:
    if not m:
        return "1"
    parts = []
    for i, e in m:
        parts.append(f"{alphabet.name}{i}" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts)


def _cap_min(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# graded polynomials


class GradedPoly:
    """Sparse polynomial with eager canonicalization and cap truncation.

    Instances are immutable by convention: no method mutates ``self``.
    """

    __slots__ = ("alphabet", "weight_cap", "degree_cap", "index0_cap", "_terms")

    def __init__(
        self,
        alphabet: Alphabet,
        terms: Mapping[Mono, Scalar] | None = None,
        *,
        weight_cap: int | None = None,
        degree_cap: int | None = None,
        index0_cap: int | None = None,
    ):
        self.alphabet = alphabet
        self.weight_cap = weight_cap
        self.degree_cap = degree_cap
        self.index0_cap = index0_cap
        clean: dict = {}
        if terms:
            for m, c in terms.items():
                if not c:
                    continue
                if self._within_caps(m):
                    clean[m] = Fraction(c)
        self._terms = clean

    # -- construction helpers

    @classmethod
    def zero(cls, alphabet: Alphabet, **caps) -> "GradedPoly":
        return cls(alphabet, None, **caps)

    @classmethod
    def const(cls, alphabet: Alphabet, value: Scalar, **caps) -> "GradedPoly":
        return cls(alphabet, {UNIT: value}, **caps)

    @classmethod
    def variable(cls, alphabet: Alphabet, index: int, **caps) -> "GradedPoly":
        return cls(alphabet, {((index, 1),): 1}, **caps)

    def _within_caps(self, m: Mono) -> bool:
        if self.weight_cap is not None and mono_weight(m, self.alphabet) > self.weight_cap:
            return False
        if self.degree_cap is not None and mono_degree(m) > self.degree_cap:
            return False
        if self.index0_cap is not None and mono_exp(m, 0) > self.index0_cap:
            return False
        return True

    def caps(self) -> dict:
        return {
            "weight_cap": self.weight_cap,
            "degree_cap": self.degree_cap,
            "index0_cap": self.index0_cap,
        }

    def with_caps(self, **caps) -> "GradedPoly":
        """Return a copy carrying the given caps (re-truncating as needed)."""
        merged = self.caps()
        merged.update(caps)
        return GradedPoly(self.alphabet, self._terms, **merged)

    def _joint_caps(self, other: "GradedPoly") -> dict:
        return {
            "weight_cap": _cap_min(self.weight_cap, other.weight_cap),
            "degree_cap": _cap_min(self.degree_cap, other.degree_cap),
            "index0_cap": _cap_min(self.index0_cap, other.index0_cap),
        }

    # -- inspection

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self):
        return self._terms.keys()

    def coeff(self, m: Mono) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get(UNIT, Fraction(0))

    def homogeneous_weight(self) -> int | None:
        """The common weight of all monomials, or None if mixed/zero."""
        weights = {mono_weight(m, self.alphabet) for m in self._terms}
        if len(weights) == 1:
            return weights.pop()
        return None

    # -- arithmetic

    def _check_alphabet(self, other: "GradedPoly"):
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError(
                f"cannot combine '{self.alphabet.name}' with '{other.alphabet.name}' variables"
            )

    def _coerce(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            self._check_alphabet(other)
            return other
        if isinstance(other, (int, Fraction)):
            return GradedPoly.const(self.alphabet, other, **self.caps())
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, Fraction(0)) + c
        return GradedPoly(self.alphabet, acc, **self._joint_caps(other))

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(
            self.alphabet, {m: -c for m, c in self._terms.items()}, **self.caps()
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "GradedPoly":
        c = Fraction(c)
        if not c:
            return GradedPoly.zero(self.alphabet, **self.caps())
        return GradedPoly(
            self.alphabet, {m: v * c for m, v in self._terms.items()}, **self.caps()
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        self._check_alphabet(other)
        caps = self._joint_caps(other)
        out = GradedPoly.zero(self.alphabet, **caps)
        acc: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                if not out._within_caps(m):
                    continue
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
        return GradedPoly(self.alphabet, acc, **caps)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, c: Scalar):
        return self.scale(Fraction(1, 1) / Fraction(c))

    def __pow__(self, n: int) -> "GradedPoly":
        if n < 0:
            raise DomainError("negative polynomial powers are not defined")
        out = GradedPoly.const(self.alphabet, 1, **self.caps())
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def partial(self, index: int) -> "GradedPoly":
        """Formal partial derivative in ``x_index``."""
        if index < 0:
            raise DomainError("variable index must be >= 0")
        acc: dict = {}
        for m, c in self._terms.items():
            e = mono_exp(m, index)
            if not e:
                continue
            lowered = mono_quotient(m, ((index, 1),))
            acc[lowered] = acc.get(lowered, Fraction(0)) + c * e
        return GradedPoly(self.alphabet, acc, **self.caps())

    def alternate_signs(self) -> "GradedPoly":
        """Substitute ``x_i -> -x_i`` for every variable."""
        return GradedPoly(
            self.alphabet,
            {m: (-c if mono_degree(m) % 2 else c) for m, c in self._terms.items()},
            **self.caps(),
        )

    # -- comparison / display

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self._terms == {UNIT: Fraction(other)}
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.alphabet == other.alphabet and self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def sorted_items(self):
        return sorted(
            self._terms.items(), key=lambda kv: mono_order_key(kv[0], self.alphabet)
        )

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for m, c in self.sorted_items():
            coeff = rational_to_str(c)
            if m == UNIT:
                bits.append(coeff)
            elif c == 1:
                bits.append(mono_str(m, self.alphabet))
            else:
                bits.append(f"{coeff}*{mono_str(m, self.alphabet)}")
        return " + ".join(bits)


def poly_mul(a: GradedPoly, b: GradedPoly) -> GradedPoly:
    """Exact product; terms whose weight exceeds the joint cap are dropped."""
    return a * b


def poly_partial(a, index: int):
    """Formal partial derivative of a :class:`GradedPoly` or :class:`ExpPoly`."""
    return a.partial(index)


def coeff(a, *args) -> Fraction:
    """Coefficient extraction.

    ``coeff(poly, mono)`` for a :class:`GradedPoly`;
    ``coeff(exp_poly, sector, mono)`` for an :class:`ExpPoly`.
    Returns 0 when the monomial is absent.
    """
    return a.coeff(*args)


def exp_truncated(a: GradedPoly) -> GradedPoly:
    """Truncated exponential ``sum_j a^j / j!``.

    Requires a zero constant term; the sum is finite because every power
    eventually falls outside the caps.
    """
    if a.constant_term():
        raise DomainError("exp_truncated requires a zero constant term")
    caps_total = sum(c for c in (a.weight_cap, a.degree_cap, a.index0_cap) if c is not None)
    if caps_total == 0 and not a.is_zero:
        raise DomainError("exp_truncated requires at least one finite cap")
    out = GradedPoly.const(a.alphabet, 1, **a.caps())
    power = out
    j = 0
    while True:
        j += 1
        power = (power * a) / j
        if power.is_zero:
            return out
        out = out + power
        if j > caps_total + 1:
            raise DomainError("exponential does not terminate under the given caps")


# ---------------------------------------------------------------------------
# sector-graded polynomials


class ExpPoly:
    """Finite sum over integer sectors ``d`` of ``e^{d p_0}``-weighted
    polynomial factors (``u^d`` for families without sector coupling).

    Products add sector indices.  For sector-coupled families the partial
    derivative in the index-0 variable satisfies
    ``d/dp_0 (e^{d p_0} q) = e^{d p_0} (d q + dq/dp_0)`` exactly.
    """

    __slots__ = ("alphabet", "_sectors")

    def __init__(self, alphabet: Alphabet, sectors: Mapping[int, GradedPoly] | None = None):
        self.alphabet = alphabet
        clean: dict = {}
        if sectors:
            for d, poly in sectors.items():
                if poly.alphabet != alphabet:
                    raise AlphabetMismatchError("sector polynomial alphabet mismatch")
                if not poly.is_zero:
                    clean[d] = poly
        self._sectors = clean

    @classmethod
    def zero(cls, alphabet: Alphabet) -> "ExpPoly":
        return cls(alphabet)

    @classmethod
    def from_poly(cls, poly: GradedPoly, sector: int = 0) -> "ExpPoly":
        return cls(poly.alphabet, {sector: poly})

    @property
    def is_zero(self) -> bool:
        return not self._sectors

    def sectors(self):
        return self._sectors.items()

    def sector_indices(self):
        return sorted(self._sectors)

    def sector(self, d: int) -> GradedPoly:
        poly = self._sectors.get(d)
        if poly is None:
            return GradedPoly.zero(self.alphabet)
        return poly

    def coeff(self, sector: int, m: Mono) -> Fraction:
        poly = self._sectors.get(sector)
        if poly is None:
            return Fraction(0)
        return poly.coeff(m)

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError("sector sum alphabet mismatch")
        acc = dict(self._sectors)
        for d, poly in other._sectors.items():
            acc[d] = acc[d] + poly if d in acc else poly
        return ExpPoly(self.alphabet, acc)

    def __neg__(self) -> "ExpPoly":
        return ExpPoly(self.alphabet, {d: -p for d, p in self._sectors.items()})

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def scale(self, c: Scalar) -> "ExpPoly":
        return ExpPoly(self.alphabet, {d: p.scale(c) for d, p in self._sectors.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, GradedPoly):
            other = ExpPoly.from_poly(other)
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError("sector product alphabet mismatch")
        acc: dict = {}
        for d1, p1 in self._sectors.items():
            for d2, p2 in other._sectors.items():
                d = d1 + d2
                prod = p1 * p2
                acc[d] = acc[d] + prod if d in acc else prod
        return ExpPoly(self.alphabet, acc)

    __rmul__ = __mul__

    def shift_sectors(self, k: int) -> "ExpPoly":
        return ExpPoly(self.alphabet, {d + k: p for d, p in self._sectors.items()})

    def partial(self, index: int) -> "ExpPoly":
        acc: dict = {}
        for d, poly in self._sectors.items():
            out = poly.partial(index)
            if index == 0 and self.alphabet.sector_coupled and d:
                out = out + poly.scale(d)
            if not out.is_zero:
                acc[d] = acc[d] + out if d in acc else out
        return ExpPoly(self.alphabet, acc)

    def with_caps(self, **caps) -> "ExpPoly":
        return ExpPoly(self.alphabet, {d: p.with_caps(**caps) for d, p in self._sectors.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self.alphabet == other.alphabet and self._sectors == other._sectors

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self._sectors:
            return "0"
        base = "e^{%dp0}" if self.alphabet.sector_coupled else "u^%d"
        bits = []
        for d in self.sector_indices():
            prefix = "" if d == 0 else (base % d) + "*"
            bits.append(f"{prefix}({self._sectors[d]!r})")
        return " + ".join(bits)
