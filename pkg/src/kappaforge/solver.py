"""Differential operators acting on exponentials of truncated potentials,
and the triangular solver extracting unknown coefficients from the
constraint that the result vanishes.

An operator is a finite list of terms ``c * u^shift * multiplier * D`` where
``D`` is the identity, a first, or a second partial derivative.  Applying it
to ``e^F`` and stripping the exponential gives, term by term,

    c * u^shift * multiplier * E,   with  E = 1,  dF/dx_a,
    or  d^2F/dx_a dx_b + (dF/dx_a)(dF/dx_b),

computed exactly in the sector-graded algebra.  Setting the coefficient of a
monomial in a sector to zero yields an affine relation; each constraint
operator carries one designated leading term ``A * d/dx_k`` with unit
multiplier, which the solver uses as pivot.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Protocol

from .algebra import (
    Alphabet,
    ExpPoly,
    GradedPoly,
    Mono,
    mono_degree,
    mono_exp,
    mono_mul_var,
    mono_quotient,
    mono_splits,
    mono_str,
)
from .errors import DependencyError, DomainError

#: A solved table: intersection-number keys mapped to exact rational values.
#: Persisted through :mod:`kappaforge.records`.
NumberTable = dict


@dataclass(frozen=True)
class OperatorTerm:
    """One summand of a differential operator.

    ``shift`` is the power of ``u`` (equivalently of ``e^{p_0}``) carried by
    the term: 0 for linear terms, +2 for the genus-raising families, and the
    absolute sector for scalar terms (which consume no potential data).
    """

    coeff: Fraction
    shift: int
    multiplier: GradedPoly
    derivatives: tuple

    def __post_init__(self):
        if len(self.derivatives) > 2:
            raise DomainError("operator terms carry at most two derivatives")
        if any(i < 0 for i in self.derivatives):
            raise DomainError("derivative indices must be >= 0")


def term(coeff, shift: int, multiplier: GradedPoly, derivatives: Iterable[int] = ()) -> OperatorTerm:
    return OperatorTerm(Fraction(coeff), shift, multiplier, tuple(derivatives))


class DiffOperator:
    """A named finite list of operator terms over one variable family.

    At most one term may have the pivot shape (shift 0, a single derivative,
    unit multiplier); solver use requires it, and every constraint-family
    operator carries exactly one.
    """

    __slots__ = ("name", "alphabet", "terms", "pivot_term", "pivot_coeff", "pivot_index")

    def __init__(self, name: str, alphabet: Alphabet, terms: Iterable[OperatorTerm]):
        self.name = name
        self.alphabet = alphabet
        self.terms = tuple(t for t in terms if t.coeff and not t.multiplier.is_zero)
        pivots = [
            t
            for t in self.terms
            if t.shift == 0
            and len(t.derivatives) == 1
            and t.multiplier == 1
        ]
        if len(pivots) > 1:
            raise DomainError(
                f"operator {name!r} has {len(pivots)} leading A*d/dx_k candidates; need at most one"
            )
        self.pivot_term = pivots[0] if pivots else None
        self.pivot_coeff = self.pivot_term.coeff if pivots else None
        self.pivot_index = self.pivot_term.derivatives[0] if pivots else None

    @property
    def max_derivative_order(self) -> int:
        return max((len(t.derivatives) for t in self.terms), default=0)

    def __repr__(self) -> str:
        return f"DiffOperator({self.name!r}, {len(self.terms)} terms)"


# ---------------------------------------------------------------------------
# potentials


@dataclass
class Potential:
    """A truncated potential: sector-graded body plus truncation metadata.

    ``max_sector`` is the largest complete sector.  Coefficient queries
    beyond it raise :class:`DependencyError` (absent coefficients inside the
    bound are genuine zeros).
    """

    body: ExpPoly
    max_sector: int
    weight_cap: int | None = None
    degree_cap: int | None = None
    label: str = ""

    @property
    def alphabet(self) -> Alphabet:
        return self.body.alphabet

    def result_caps(self) -> dict:
        return {"weight_cap": self.weight_cap, "degree_cap": self.degree_cap, "index0_cap": None}

    def sector(self, d: int) -> GradedPoly:
        if d > self.max_sector:
            raise DependencyError(
                f"sector {d} of {self.label or 'potential'} is beyond the solve bound {self.max_sector}"
            )
        return self.body.sector(d)

    def coeff(self, sector: int, mono: Mono) -> Fraction:
        return self.sector(sector).coeff(mono)


class CoefficientSource(Protocol):
    """Read access to potential coefficients, for constraint extraction.

    ``known_zero`` must be a cheap a-priori test (sector validity,
    stability, dimension) that never computes new values; ``coeff`` may
    recurse into a solver.
    """

    alphabet: Alphabet
    min_sector: int

    def known_zero(self, sector: int, mono: Mono) -> bool: ...

    def coeff(self, sector: int, mono: Mono) -> Fraction: ...


# ---------------------------------------------------------------------------
# applying an operator to e^F (polynomial route)


def apply_operator(op: DiffOperator, potential: Potential) -> ExpPoly:
    """Return ``e^{-F} op(e^F)`` as a sector-graded polynomial.

    Exact in every sector up to ``potential.max_sector`` (and, when the
    potential carries a degree cap N, for monomials of degree at most
    N minus the operator's derivative order).
    """
    caps = potential.result_caps()
    F = potential.body.with_caps(**caps)
    alphabet = potential.alphabet
    firsts: dict = {}
    for t in op.terms:
        for a in t.derivatives:
            if a not in firsts:
                firsts[a] = F.partial(a)
    out = ExpPoly.zero(alphabet)
    unit = ExpPoly.from_poly(GradedPoly.const(alphabet, 1, **caps))
    for t in op.terms:
        if not t.derivatives:
            factor = unit
        elif len(t.derivatives) == 1:
            factor = firsts[t.derivatives[0]]
        else:
            a, b = t.derivatives
            factor = firsts[a].partial(b) + firsts[a] * firsts[b]
        mult = ExpPoly.from_poly(t.multiplier.with_caps(**caps))
        out = out + (mult * factor).scale(t.coeff).shift_sectors(t.shift)
    return out


@dataclass
class AnnihilationReport:
    """Outcome of checking that an applied operator vanishes identically."""

    operator: str
    ok: bool
    sectors_checked: tuple
    monomials_checked: int
    first_violation: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            if not self.monomials_checked:
                return f"{self.operator}: identically zero on sectors {list(self.sectors_checked)}"
            return (
                f"{self.operator}: zero on all {self.monomials_checked} surviving coefficients "
                f"across sectors {list(self.sectors_checked)}"
            )
        s, m, v = self.first_violation
        return f"{self.operator}: nonzero coefficient {v} at sector {s}, monomial {m}"


def check_annihilation(op: DiffOperator, potential: Potential) -> AnnihilationReport:
    """Assert ``op(e^F) = 0`` on every certified sector and monomial.

    Certified means: sector at most the potential's solve bound, and (for
    degree-truncated potentials) monomial degree small enough that every
    coefficient it references was inside the truncation.
    """
    applied = apply_operator(op, potential)
    order = op.max_derivative_order
    degree_bound = None
    if potential.degree_cap is not None:
        degree_bound = potential.degree_cap - order
    sectors = sorted(
        d
        for d in set(applied.sector_indices()) | set(potential.body.sector_indices())
        if d <= potential.max_sector
    )
    checked = 0
    first = None
    for d in sectors:
        poly = applied.sector(d)
        for m, c in poly.sorted_items():
            if degree_bound is not None and mono_degree(m) > degree_bound:
                continue
            checked += 1
            if c and first is None:
                first = (d, mono_str(m, potential.alphabet), c)
    return AnnihilationReport(
        operator=op.name,
        ok=first is None,
        sectors_checked=tuple(sectors),
        monomials_checked=checked,
        first_violation=first,
    )


# ---------------------------------------------------------------------------
# constraint extraction (coefficient route)


def _deriv_pieces(source: CoefficientSource, s: int, a: int, q: Mono) -> list:
    """Pieces ((sector, mono), scalar) with
    coeff(dF/dx_a at sector s, q) = sum scalar * F[sector, mono]."""
    pieces = []
    if a == 0 and source.alphabet.sector_coupled and s:
        pieces.append(((s, q), Fraction(s)))
    e = mono_exp(q, a)
    pieces.append(((s, mono_mul_var(q, a)), Fraction(e + 1)))
    return pieces


def _deriv2_pieces(source: CoefficientSource, s: int, a: int, b: int, q: Mono) -> list:
    """Pieces for the pure second derivative coeff(d2F/dx_a dx_b, q)."""
    coupled = source.alphabet.sector_coupled
    if coupled and a == 0 and b == 0:
        pieces = []
        e0 = mono_exp(q, 0)
        if s:
            pieces.append(((s, q), Fraction(s * s)))
            pieces.append(((s, mono_mul_var(q, 0)), Fraction(2 * s * (e0 + 1))))
        pieces.append(((s, mono_mul_var(q, 0, 2)), Fraction((e0 + 1) * (e0 + 2))))
        return pieces
    if coupled and (a == 0 or b == 0):
        other = b if a == 0 else a
        pieces = []
        eo = mono_exp(q, other)
        if s:
            pieces.append(((s, mono_mul_var(q, other)), Fraction(s * (eo + 1))))
        e0 = mono_exp(q, 0)
        pieces.append(
            ((s, mono_mul_var(mono_mul_var(q, other), 0)), Fraction((e0 + 1) * (eo + 1)))
        )
        return pieces
    if a == b:
        e = mono_exp(q, a)
        return [((s, mono_mul_var(q, a, 2)), Fraction((e + 1) * (e + 2)))]
    ea = mono_exp(q, a)
    eb = mono_exp(q, b)
    return [((s, mono_mul_var(mono_mul_var(q, a), b)), Fraction((ea + 1) * (eb + 1)))]


def _eval_pieces(source: CoefficientSource, pieces: list) -> Fraction:
    total = Fraction(0)
    for (s, m), scalar in pieces:
        if source.known_zero(s, m):
            continue
        total += scalar * source.coeff(s, m)
    return total


def _term_coeff(term_: OperatorTerm, source: CoefficientSource, sector: int, mono: Mono) -> Fraction:
    nderiv = len(term_.derivatives)
    if nderiv == 0:
        if sector != term_.shift:
            return Fraction(0)
        return term_.coeff * term_.multiplier.coeff(mono)
    s_in = sector - term_.shift
    lo = source.min_sector
    total = Fraction(0)
    for m1, c1 in term_.multiplier.items():
        q = mono_quotient(mono, m1)
        if q is None:
            continue
        if nderiv == 1:
            val = _eval_pieces(source, _deriv_pieces(source, s_in, term_.derivatives[0], q))
        else:
            a, b = term_.derivatives
            val = _eval_pieces(source, _deriv2_pieces(source, s_in, a, b, q))
            for q1, q2 in mono_splits(q):
                for s1 in range(lo, s_in - lo + 1, 2):
                    s2 = s_in - s1
                    live1 = [
                        (k, sc)
                        for k, sc in _deriv_pieces(source, s1, a, q1)
                        if not source.known_zero(*k)
                    ]
                    if not live1:
                        continue
                    live2 = [
                        (k, sc)
                        for k, sc in _deriv_pieces(source, s2, b, q2)
                        if not source.known_zero(*k)
                    ]
                    if not live2:
                        continue
                    v1 = sum(sc * source.coeff(*k) for k, sc in live1)
                    v2 = sum(sc * source.coeff(*k) for k, sc in live2)
                    val += v1 * v2
        if val:
            total += term_.coeff * c1 * val
    return total


def applied_coeff(
    op: DiffOperator,
    source: CoefficientSource,
    sector: int,
    mono: Mono,
    *,
    skip_term: OperatorTerm | None = None,
) -> Fraction:
    """Coefficient of ``mono`` in sector ``sector`` of ``e^{-F} op(e^F)``,
    evaluated against a coefficient source rather than an assembled body."""
    total = Fraction(0)
    for t in op.terms:
        if t is skip_term:
            continue
        total += _term_coeff(t, source, sector, mono)
    return total


@dataclass
class LinearRelation:
    """The affine relation ``A x + B = 0`` for one pivot coefficient ``x``."""

    operator: str
    sector: int
    mono: Mono
    pivot_sector: int
    pivot_mono: Mono
    pivot_coeff: Fraction
    constant: Fraction

    def solve(self) -> Fraction:
        return -self.constant / self.pivot_coeff


def constraint_at(op: DiffOperator, source: CoefficientSource, sector: int, mono: Mono) -> LinearRelation:
    """Extract the affine relation imposed by the vanishing of one applied
    coefficient, solved for the pivot unknown ``F[sector, mono * x_k]``.

    Every other coefficient the relation touches is evaluated through the
    source (which must already know it, or be able to compute it).
    """
    if op.pivot_term is None:
        raise DomainError(f"operator {op.name!r} has no pivot term to solve for")
    pivot_key = (sector, mono_mul_var(mono, op.pivot_index))
    constant = applied_coeff(op, source, sector, mono, skip_term=op.pivot_term)
    pivot_scale = Fraction(0)
    for key, scalar in _deriv_pieces(source, sector, op.pivot_index, mono):
        if key == pivot_key:
            pivot_scale += op.pivot_coeff * scalar
        elif not source.known_zero(*key):
            constant += op.pivot_coeff * scalar * source.coeff(*key)
    if not pivot_scale:
        raise DependencyError(f"pivot of {op.name} vanishes at {mono!r}")
    return LinearRelation(
        operator=op.name,
        sector=sector,
        mono=mono,
        pivot_sector=pivot_key[0],
        pivot_mono=pivot_key[1],
        pivot_coeff=pivot_scale,
        constant=constant,
    )


def solve(keys_in_order: Iterable, resolve: Callable, table: dict | None = None) -> dict:
    """Fill a table by resolving keys in a well-founded order.

    ``resolve`` must only depend on keys strictly earlier in the order (or
    already present); the result is deterministic and idempotent.
    """
    if table is None:
        table = {}
    for key in keys_in_order:
        if key not in table:
            table[key] = resolve(key)
    return table
