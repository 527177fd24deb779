"""Top intersection numbers of kappa-classes on unpointed moduli spaces.

The generating function lives in the p-variables, one sector ``e^{(2g-2)p_0}``
per genus with the single seed term ``p_0/24``; it is annihilated by a family
of conjugated Virasoro operators whose pivot terms ``-alpha_{n,0} d/dp_n``
drive a triangular recursion over (genus, monomial length).  Powers of
``kappa_0`` never enter the recursion: they are folded by the closed form
``[kappa^I kappa_0^n]_g = (2g-2)^n [kappa^I]_g``.
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
    P_VARS,
    make_mono,
    mono_exp,
    mono_order_key,
    mono_quotient,
    mono_weight,
    odd_double_factorial,
)
from .combinat import exponent_norm, partitions
from .errors import DependencyError, DomainError
from .genfun import bell_coeff_series, schur_poly
from .solver import DiffOperator, NumberTable, Potential, constraint_at, solve, term

_ONE_P = GradedPoly.const(P_VARS, 1)


def alpha_coeffs(n: int) -> list:
    """Coefficients of ``prod_{i=0}^{n} (x + i + 3/2)`` by power of x.

    ``alpha_coeffs(n)[d]`` is the weight of the d-th Bell series in the
    degree-zero part of the (n)-th operator; the constant coefficient equals
    ``(2n+3)!!/2^{n+1}``.
    """
    coeffs = [Fraction(1)]
    for i in range(n + 1):
        shift = Fraction(2 * i + 3, 2)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d] += c * shift
            nxt[d + 1] += c
        coeffs = nxt
    return coeffs


@lru_cache(maxsize=None)
def build_Lhat(n: int, cap: int) -> DiffOperator:
    """The kappa-side operator of index ``n`` with series multipliers
    generated up to weight ``cap``.

    For ``n = 0`` this is ``-(3/2) d/dp_0 + sum m p_m d/dp_m + 1/16``.  For
    ``n >= 1`` the degree-zero part is assembled from the Bell coefficient
    series; the genus-raising part carries ``(u e^{p_0})^2`` (``u`` fixed to
    1) with Schur polynomial multipliers.  Derivative indices that would be
    negative denote vanishing terms and are dropped.
    """
    if n < 0:
        raise DomainError("kappa operators are defined for n >= 0")
    terms = []
    if n == 0:
        terms.append(term(Fraction(-3, 2), 0, _ONE_P, (0,)))
        for m in range(1, cap + 1):
            terms.append(term(m, 0, GradedPoly.variable(P_VARS, m), (m,)))
        terms.append(term(Fraction(1, 16), 0, _ONE_P, ()))
        return DiffOperator("Lhat_0", P_VARS, terms)

    alphas = alpha_coeffs(n)
    terms.append(term(-alphas[0], 0, _ONE_P, (n,)))
    for m in range(1, cap + 1):
        mult = GradedPoly.zero(P_VARS)
        for d in range(1, n + 2):
            mult = mult + bell_coeff_series(d, cap).coeff(m).scale(alphas[d])
        if not mult.is_zero:
            terms.append(term(-1, 0, mult, (m + n,)))

    if n == 1:
        # genus-raising part of the first operator: (u e^{p0})^2/8 with
        # multipliers S_{m+2}(2p) - S_{m+2}(p) and S_{l+1}(p) S_{m+1}(p)
        for m in range(0, max(cap - 1, 0)):
            mult = schur_poly(m + 2, 2) - schur_poly(m + 2, 1)
            terms.append(term(Fraction(1, 8), 2, mult, (m,)))
        for l in range(cap):
            for m in range(cap):
                if l + m + 2 > cap:
                    continue
                mult = schur_poly(l + 1) * schur_poly(m + 1)
                terms.append(term(Fraction(1, 8), 2, mult, (l, m)))
        return DiffOperator("Lhat_1", P_VARS, terms)

    half = 2 ** (n + 1)
    pair_weights = [
        Fraction(odd_double_factorial(2 * i + 1) * odd_double_factorial(2 * n - 2 * i - 1), half)
        for i in range(n)
    ]
    single_weight = sum(pair_weights, Fraction(0)) / 2
    for m in range(cap + 1):
        if m + n - 3 < 0:
            continue
        terms.append(term(single_weight, 2, schur_poly(m, 2), (m + n - 3,)))
    for i in range(n):
        for m in range(cap + 1):
            a = m + n - 2 - i
            if a < 0:
                continue
            for l in range(cap + 1 - m):
                b = l + i - 1
                if b < 0:
                    continue
                mult = schur_poly(m) * schur_poly(l)
                terms.append(term(pair_weights[i] / 2, 2, mult, (a, b)))
    return DiffOperator(f"Lhat_{n}", P_VARS, terms)


@dataclass(frozen=True)
class KappaKey:
    """Canonical kappa-monomial key.

    ``exponents`` maps indices ``i >= 1`` to multiplicities; factors of
    ``kappa_0`` are carried separately in ``kappa0_power`` and folded by the
    ``(2g-2)^n`` closed form on evaluation.
    """

    genus: int
    exponents: tuple
    kappa0_power: int = 0

    kind = "kappa"

    @classmethod
    def make(cls, genus: int, exponents, kappa0_power: int = 0) -> "KappaKey":
        mono = make_mono(exponents)
        zero_mult = mono_exp(mono, 0)
        if zero_mult:
            mono = mono_quotient(mono, ((0, zero_mult),))
        if kappa0_power + zero_mult < 0:
            raise DomainError("kappa_0 power must be >= 0")
        return cls(genus, mono, kappa0_power + zero_mult)

    @property
    def weight(self) -> int:
        return sum(i * m for i, m in self.exponents)

    @property
    def length(self) -> int:
        return sum(m for _, m in self.exponents)

    def exponent_pairs(self) -> tuple:
        if self.kappa0_power:
            return tuple(sorted(((0, self.kappa0_power),) + self.exponents))
        return self.exponents

    def mono(self) -> Mono:
        return self.exponents


class _KappaSource:
    """Coefficient view of the kappa-potential.

    Sector 0 holds only the seed (coefficient 1/24 on ``p_0``); sector
    ``2g-2`` (g >= 2) holds the kappa_0-free genus-g polynomial, whose
    monomials all have weight exactly ``3g-3``.
    """

    __slots__ = ("_engine",)

    alphabet = P_VARS
    min_sector = 0

    def __init__(self, engine: "KappaEngine"):
        self._engine = engine

    def known_zero(self, sector: int, mono: Mono) -> bool:
        if sector < 0 or sector % 2:
            return True
        if sector == 0:
            return mono != ((0, 1),)
        if mono_exp(mono, 0):
            return True
        genus = sector // 2 + 1
        return mono_weight(mono, P_VARS) != 3 * genus - 3

    def coeff(self, sector: int, mono: Mono) -> Fraction:
        if self.known_zero(sector, mono):
            return Fraction(0)
        if sector == 0:
            return Fraction(1, 24)
        genus = sector // 2 + 1
        return self._engine._value(genus, mono) / exponent_norm(mono)


class KappaEngine:
    """Memoized kappa-number computer.

    ``pivot_rule`` selects which factor of a monomial the recursion
    eliminates: ``"largest"`` (default) or ``"smallest"`` index; both must
    produce identical tables, which is exercised as a consistency test of
    the over-determined operator family.
    """

    def __init__(self, pivot_rule: str = "largest", p0_degree_cap: int = 2):
        if pivot_rule not in ("largest", "smallest"):
            raise DomainError("pivot_rule must be 'largest' or 'smallest'")
        self.pivot_rule = pivot_rule
        self.p0_degree_cap = p0_degree_cap
        self._values: dict = {}
        self._local = threading.local()
        self._source = _KappaSource(self)

    # -- public queries

    def kappa_number(self, genus: int, exponents, kappa0_power: int = 0) -> Fraction:
        """``[prod kappa_i^{mu_i} * kappa_0^n]_g``.

        Genus-1 values follow the convention ``[kappa_0]_1 = 1/24`` (all
        other genus-1 monomials vanish); weight mismatches return 0 for
        degree reasons.
        """
        if genus < 1:
            raise DomainError("kappa numbers need genus >= 1")
        key = KappaKey.make(genus, exponents, kappa0_power)
        if genus == 1:
            if not key.exponents and key.kappa0_power == 1:
                return Fraction(1, 24)
            return Fraction(0)
        if key.weight != 3 * genus - 3:
            return Fraction(0)
        base = self._value(genus, key.exponents)
        if key.kappa0_power:
            return base * (2 * genus - 2) ** key.kappa0_power
        return base

    def table(self) -> dict:
        return {
            KappaKey(g, mono): v for (g, mono), v in sorted(self._values.items())
        }

    def preload(self, genus: int, exponents, value) -> None:
        """Install a trusted kappa_0-free value (cache warm-up)."""
        key = KappaKey.make(genus, exponents)
        if genus >= 2 and not key.kappa0_power:
            self._values.setdefault((genus, key.exponents), Fraction(value))

    # -- resolution

    @property
    def _in_progress(self) -> set:
        keys = getattr(self._local, "keys", None)
        if keys is None:
            keys = self._local.keys = set()
        return keys

    def _value(self, genus: int, mono: Mono) -> Fraction:
        key = (genus, mono)
        cached = self._values.get(key)
        if cached is not None:
            return cached
        active = self._in_progress
        if key in active:
            raise DependencyError(f"cyclic dependency at kappa key {key}")
        active.add(key)
        try:
            pivot = mono[-1][0] if self.pivot_rule == "largest" else mono[0][0]
            op = build_Lhat(pivot, 3 * genus - 3)
            out_mono = mono_quotient(mono, ((pivot, 1),))
            relation = constraint_at(op, self._source, 2 * genus - 2, out_mono)
            value = relation.solve() * exponent_norm(mono)
        finally:
            active.discard(key)
        self._values[key] = value
        return value

    # -- bulk interfaces

    def iter_keys(self, max_genus: int):
        """kappa_0-free keys up to the genus bound, in the well-founded
        order (genus, then length, then the monomial order)."""
        for genus in range(2, max_genus + 1):
            monos = [
                make_mono([(i, 1) for i in part])
                for part in partitions(3 * genus - 3)
            ]
            monos.sort(key=lambda m: mono_order_key(m, P_VARS)[1:])
            for mono in monos:
                yield KappaKey(genus, mono)

    def solve(self, max_genus: int) -> NumberTable:
        """Fill and return the table up to the genus bound (including the
        genus-1 seed convention entry)."""
        if max_genus < 1:
            raise DomainError("max_genus must be >= 1")
        table = {KappaKey(1, (), 1): Fraction(1, 24)}
        return solve(
            self.iter_keys(max_genus),
            lambda key: self._value(key.genus, key.exponents),
            table,
        )

    def kappa_potential(self, max_genus: int) -> Potential:
        """The kappa-potential truncated at the genus bound: seed ``p_0/24``
        plus one ``e^{(2g-2)p_0}`` sector per genus, kappa_0-free with
        ``1/prod mu_i!`` normalization."""
        if max_genus < 1:
            raise DomainError("max_genus must be >= 1")
        cap = max(3 * max_genus - 3, 1)
        sectors = {
            0: GradedPoly(
                P_VARS,
                {((0, 1),): Fraction(1, 24)},
                weight_cap=cap,
                index0_cap=self.p0_degree_cap,
            )
        }
        for genus in range(2, max_genus + 1):
            terms: dict = {}
            for key in self.iter_keys(genus):
                if key.genus != genus:
                    continue
                mono = key.mono()
                terms[mono] = self._value(genus, mono) / exponent_norm(mono)
            sectors[2 * genus - 2] = GradedPoly(P_VARS, terms, weight_cap=cap)
        return Potential(
            body=ExpPoly(P_VARS, sectors),
            max_sector=2 * max_genus - 2,
            weight_cap=cap,
            degree_cap=None,
            label="kappa potential",
        )


_default_engine: KappaEngine | None = None


def default_engine() -> KappaEngine:
    global _default_engine
    if _default_engine is None:
        _default_engine = KappaEngine()
    return _default_engine


def kappa_number(genus: int, exponents, kappa0_power: int = 0) -> Fraction:
    """Module-level convenience using a shared engine."""
    return default_engine().kappa_number(genus, exponents, kappa0_power)
