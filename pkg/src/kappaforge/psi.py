"""Top intersection numbers of psi-classes on moduli of stable curves.

The brackets ``<tau_{k_1} ... tau_{k_n}>_g`` are computed from the classical
Virasoro constraints annihilating the exponential of the point potential:
the recursion is extracted mechanically from the operators by coefficient
matching (no transcribed recursion formulas), starting from the single seed
``<tau_0^3>_0 = 1``.  String and dilaton shortcuts handle insertions of
``tau_0`` and ``tau_1``; their agreement with the operator route is a
standing test.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import (
    ExpPoly,
    GradedPoly,
    Mono,
    T_VARS,
    make_mono,
    mono_degree,
    mono_weight,
    odd_double_factorial,
)
from .combinat import compositions_into_parts, exponent_norm, multiset_norm
from .errors import DependencyError, DomainError
from .solver import (
    DiffOperator,
    NumberTable,
    Potential,
    constraint_at,
    solve,
    term,
)

_ONE_T = GradedPoly.const(T_VARS, 1)


@lru_cache(maxsize=None)
def build_L(n: int, index_bound: int = 32) -> DiffOperator:
    """The classical Virasoro operator ``L_n`` (n >= -1) in the t-variables.

    ``index_bound`` caps the index of the variable appearing in the linear
    ``t_i d/dt_j`` family; terms beyond it cannot touch monomials whose
    variables all have index <= index_bound.
    """
    if n < -1:
        raise DomainError("Virasoro operators are defined for n >= -1")
    terms = []
    if n == -1:
        terms.append(term(-1, 0, _ONE_T, (0,)))
        for i in range(index_bound):
            terms.append(term(1, 0, GradedPoly.variable(T_VARS, i + 1), (i,)))
        t0sq = GradedPoly(T_VARS, {make_mono({0: 2}): 1})
        terms.append(term(Fraction(1, 2), -2, t0sq, ()))
    elif n == 0:
        terms.append(term(Fraction(-3, 2), 0, _ONE_T, (1,)))
        for i in range(index_bound + 1):
            terms.append(term(Fraction(2 * i + 1, 2), 0, GradedPoly.variable(T_VARS, i), (i,)))
        terms.append(term(Fraction(1, 16), 0, _ONE_T, ()))
    else:
        half = 2 ** (n + 1)
        terms.append(term(Fraction(-odd_double_factorial(2 * n + 3), half), 0, _ONE_T, (n + 1,)))
        for i in range(index_bound + 1):
            c = Fraction(
                odd_double_factorial(2 * i + 2 * n + 1),
                odd_double_factorial(2 * i - 1) * half,
            )
            terms.append(term(c, 0, GradedPoly.variable(T_VARS, i), (i + n,)))
        for i in range(n):
            c = Fraction(
                odd_double_factorial(2 * i + 1) * odd_double_factorial(2 * (n - i) - 1),
                2 * half,
            )
            terms.append(term(c, 2, _ONE_T, (i, n - 1 - i)))
    return DiffOperator(f"L_{n}", T_VARS, terms)


@dataclass(frozen=True)
class PsiKey:
    """A bracket key: genus plus the multiset of psi-exponents, sorted."""

    genus: int
    exponents: tuple

    kind = "psi"

    @classmethod
    def make(cls, genus: int, exponents) -> "PsiKey":
        ks = tuple(sorted(int(k) for k in exponents))
        if genus < 0:
            raise DomainError("genus must be >= 0")
        if ks and ks[0] < 0:
            raise DomainError("psi-exponents must be >= 0")
        return cls(genus, ks)

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def weight(self) -> int:
        return sum(self.exponents)

    @property
    def stable(self) -> bool:
        return 2 * self.genus - 2 + self.n > 0

    @property
    def dimension_ok(self) -> bool:
        return self.weight == 3 * self.genus - 3 + self.n

    def exponent_pairs(self) -> tuple:
        counts: dict = {}
        for k in self.exponents:
            counts[k] = counts.get(k, 0) + 1
        return tuple(sorted(counts.items()))

    def mono(self) -> Mono:
        return make_mono([(k, 1) for k in self.exponents])


class _PsiSource:
    """Coefficient view of the point potential for constraint extraction.

    Sector ``r`` carries ``u^r``, so genus ``g`` lives at ``r = 2g - 2``.
    Unstable or dimension-violating keys are zero a priori.
    """

    __slots__ = ("_engine",)

    alphabet = T_VARS
    min_sector = -2

    def __init__(self, engine: "PsiEngine"):
        self._engine = engine

    def known_zero(self, sector: int, mono: Mono) -> bool:
        if sector < -2 or sector % 2:
            return True
        genus = (sector + 2) // 2
        n = mono_degree(mono)
        if 2 * genus - 2 + n <= 0:
            return True
        return mono_weight(mono, T_VARS) != 3 * genus - 3 + n

    def coeff(self, sector: int, mono: Mono) -> Fraction:
        if self.known_zero(sector, mono):
            return Fraction(0)
        genus = (sector + 2) // 2
        ks = []
        for i, e in mono:
            ks.extend([i] * e)
        return self._engine._value(genus, tuple(sorted(ks))) / exponent_norm(mono)


class PsiEngine:
    """Memoized bracket computer driven by the Virasoro constraints.

    Queries are safe from several threads: each value is pure, duplicate
    concurrent computation is idempotent, and publication into the memo is
    a single dict write.
    """

    def __init__(self):
        self._values: dict = {(0, (0, 0, 0)): Fraction(1)}
        self._local = threading.local()
        self._source = _PsiSource(self)

    # -- public queries

    def psi_number(self, genus: int, exponents) -> Fraction:
        """``<tau_{k_1} ... tau_{k_n}>_g``; 0 when the dimension constraint
        fails, and 0 for any negative exponent (vanishing convention)."""
        ks = tuple(sorted(int(k) for k in exponents))
        if genus < 0:
            raise DomainError("genus must be >= 0")
        if 2 * genus - 2 + len(ks) <= 0:
            raise DomainError(f"unstable bracket: genus {genus} with {len(ks)} insertions")
        if ks and ks[0] < 0:
            return Fraction(0)
        if sum(ks) != 3 * genus - 3 + len(ks):
            return Fraction(0)
        return self._value(genus, ks)

    def table(self) -> dict:
        """Snapshot of every bracket computed so far."""
        return {PsiKey(g, ks): v for (g, ks), v in sorted(self._values.items())}

    def preload(self, genus: int, exponents, value) -> None:
        """Install a trusted value (cache warm-up); existing entries win."""
        ks = tuple(sorted(int(k) for k in exponents))
        self._values.setdefault((genus, ks), Fraction(value))

    # -- resolution

    @property
    def _in_progress(self) -> set:
        keys = getattr(self._local, "keys", None)
        if keys is None:
            keys = self._local.keys = set()
        return keys

    def _value(self, genus: int, ks: tuple) -> Fraction:
        key = (genus, ks)
        cached = self._values.get(key)
        if cached is not None:
            return cached
        active = self._in_progress
        if key in active:
            raise DependencyError(f"cyclic dependency at psi key {key}")
        active.add(key)
        try:
            value = self._compute(genus, ks)
        finally:
            active.discard(key)
        self._values[key] = value
        return value

    def _ref(self, genus: int, ks: tuple) -> Fraction:
        """Reference with the vanishing conventions applied."""
        n = len(ks)
        if 2 * genus - 2 + n <= 0:
            return Fraction(0)
        if sum(ks) != 3 * genus - 3 + n:
            return Fraction(0)
        return self._value(genus, ks)

    def _compute(self, genus: int, ks: tuple) -> Fraction:
        n = len(ks)
        if ks and ks[0] == 0 and n >= 2:
            # string: remove one tau_0, lower one exponent in all ways
            rest = ks[1:]
            total = Fraction(0)
            seen = set()
            for j, v in enumerate(rest):
                if v == 0 or v in seen:
                    continue
                seen.add(v)
                lowered = tuple(sorted(rest[:j] + (v - 1,) + rest[j + 1 :]))
                total += rest.count(v) * self._ref(genus, lowered)
            return total
        if n >= 2 and 1 in ks:
            # dilaton: remove one tau_1, scale by 2g - 2 + n_rest
            j = ks.index(1)
            rest = ks[:j] + ks[j + 1 :]
            return (2 * genus - 2 + len(rest)) * self._ref(genus, rest)
        return self._solver_value(genus, ks)

    def _solver_value(self, genus: int, ks: tuple) -> Fraction:
        """Resolve through the Virasoro pivot, bypassing the shortcuts."""
        kmax = ks[-1]
        op = build_L(kmax - 1, index_bound=max(kmax, 1))
        out_mono = make_mono([(k, 1) for k in ks[:-1]])
        relation = constraint_at(op, self._source, 2 * genus - 2, out_mono)
        return relation.solve() * multiset_norm(ks)

    # -- bulk interfaces

    def _genus_keys(self, genus: int, max_insertions: int):
        for n in range(1, max_insertions + 1):
            if 2 * genus - 2 + n <= 0:
                continue
            weight = 3 * genus - 3 + n
            if weight < 0:
                continue
            for part in sorted(compositions_into_parts(weight, n, 0)):
                yield PsiKey(genus, tuple(sorted(part)))

    def iter_keys(self, max_genus: int, max_insertions: int):
        """All stable, dimension-valid keys within the bound, in the
        well-founded order (genus ascending, then insertions, then lex)."""
        for genus in range(max_genus + 1):
            yield from self._genus_keys(genus, max_insertions)

    def solve(self, max_genus: int, max_insertions: int) -> NumberTable:
        """Fill and return the bracket table for the whole bound."""
        return solve(
            self.iter_keys(max_genus, max_insertions),
            lambda key: self._value(key.genus, key.exponents),
        )

    def gw_potential(self, max_genus: int, max_insertions: int) -> Potential:
        """The total point potential, truncated to the given genus and
        insertion bounds; the coefficient of ``u^{2g-2} prod t_j^{n_j}/n_j!``
        is the bracket value."""
        if max_genus < 0 or max_insertions < 1:
            raise DomainError("need max_genus >= 0 and max_insertions >= 1")
        sectors: dict = {}
        for genus in range(max_genus + 1):
            terms: dict = {}
            for key in self._genus_keys(genus, max_insertions):
                value = self._value(genus, key.exponents)
                if not value:
                    continue
                mono = key.mono()
                terms[mono] = value / exponent_norm(mono)
            poly = GradedPoly(
                T_VARS,
                terms,
                weight_cap=3 * genus - 3 + max_insertions,
                degree_cap=max_insertions,
            )
            if not poly.is_zero:
                sectors[2 * genus - 2] = poly
        return Potential(
            body=ExpPoly(T_VARS, sectors),
            max_sector=2 * max_genus - 2,
            weight_cap=None,
            degree_cap=max_insertions,
            label="point potential",
        )


_default_engine: PsiEngine | None = None


def default_engine() -> PsiEngine:
    global _default_engine
    if _default_engine is None:
        _default_engine = PsiEngine()
    return _default_engine


def psi_number(genus: int, exponents) -> Fraction:
    """Module-level convenience using a shared engine."""
    return default_engine().psi_number(genus, exponents)
