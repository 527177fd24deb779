"""Special-function layer: elementary Schur polynomials, Bell polynomials,
and formal z-series with polynomial coefficients.

The elementary Schur polynomials ``S_i(p)`` are defined by

    sum_i S_i(p) z^i = exp(sum_{k>=1} p_k z^k),

so ``S_i`` is homogeneous of weight ``i``.  The complete Bell polynomial
``B_d(x_1, ..., x_d)`` is the coefficient polynomial of ``y^d/d!`` in
``exp(sum_j x_j y^j / j!)``; the coefficient of a monomial ``prod x_j^{m_j}``
counts set partitions of a ``d``-element set with ``m_j`` blocks of size
``j``.  Substituting the series ``q_i = -sum_{k>=1} k^i p_k z^k`` into
``B_d`` yields the z-coefficient multipliers used by the higher
kappa-Virasoro operators.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Callable, Mapping

from .algebra import Alphabet, GradedPoly, P_VARS, Scalar, X_VARS
from .errors import AlphabetMismatchError, DomainError


class ZSeries:
    """Formal (Laurent) series in ``z`` whose coefficients are polynomials.

    Exponents above ``z_cap`` are discarded; negative exponents are allowed
    (they arise in the fork change of variables) and are kept as long as
    their coefficient polynomials survive the polynomial caps.
    """

    __slots__ = ("alphabet", "z_cap", "_coeffs")

    def __init__(self, alphabet: Alphabet, coeffs: Mapping[int, GradedPoly] | None, z_cap: int):
        self.alphabet = alphabet
        self.z_cap = z_cap
        clean: dict = {}
        if coeffs:
            for k, poly in coeffs.items():
                if k > z_cap or poly.is_zero:
                    continue
                if poly.alphabet != alphabet:
                    raise AlphabetMismatchError("z-series coefficient alphabet mismatch")
                clean[k] = poly
        self._coeffs = clean

    @classmethod
    def zero(cls, alphabet: Alphabet, z_cap: int) -> "ZSeries":
        return cls(alphabet, None, z_cap)

    @classmethod
    def const(cls, alphabet: Alphabet, value: Scalar, z_cap: int, **caps) -> "ZSeries":
        return cls(alphabet, {0: GradedPoly.const(alphabet, value, **caps)}, z_cap)

    def coeff(self, k: int) -> GradedPoly:
        poly = self._coeffs.get(k)
        if poly is None:
            return GradedPoly.zero(self.alphabet)
        return poly

    def exponents(self):
        return sorted(self._coeffs)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other: "ZSeries") -> "ZSeries":
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError("z-series sum alphabet mismatch")
        cap = min(self.z_cap, other.z_cap)
        acc = {k: p for k, p in self._coeffs.items() if k <= cap}
        for k, poly in other._coeffs.items():
            if k > cap:
                continue
            acc[k] = acc[k] + poly if k in acc else poly
        return ZSeries(self.alphabet, acc, cap)

    def __neg__(self) -> "ZSeries":
        return ZSeries(self.alphabet, {k: -p for k, p in self._coeffs.items()}, self.z_cap)

    def __sub__(self, other: "ZSeries") -> "ZSeries":
        return self + (-other)

    def scale(self, c: Scalar) -> "ZSeries":
        return ZSeries(self.alphabet, {k: p.scale(c) for k, p in self._coeffs.items()}, self.z_cap)

    def __mul__(self, other: "ZSeries") -> "ZSeries":
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError("z-series product alphabet mismatch")
        cap = min(self.z_cap, other.z_cap)
        acc: dict = {}
        for k1, p1 in self._coeffs.items():
            for k2, p2 in other._coeffs.items():
                k = k1 + k2
                if k > cap:
                    continue
                prod = p1 * p2
                if prod.is_zero:
                    continue
                acc[k] = acc[k] + prod if k in acc else prod
        return ZSeries(self.alphabet, acc, cap)

    def z_dz(self) -> "ZSeries":
        """Apply the Euler operator ``z d/dz``."""
        return ZSeries(
            self.alphabet,
            {k: p.scale(k) for k, p in self._coeffs.items() if k},
            self.z_cap,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZSeries):
            return NotImplemented
        return self.alphabet == other.alphabet and self._coeffs == other._coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        return " + ".join(f"({self._coeffs[k]!r})*z^{k}" for k in self.exponents())


def zseries_exp(a: ZSeries, max_terms: int) -> ZSeries:
    """``sum_j a^j / j!`` truncated at the z-cap.

    ``max_terms`` bounds the number of powers taken; the caller must pick it
    so that every later power vanishes under the caps (for a series with
    positive minimal z-exponent, ``z_cap + 1`` suffices).
    """
    out = ZSeries.const(a.alphabet, 1, a.z_cap)
    power = out
    for j in range(1, max_terms + 1):
        power = (power * a).scale(Fraction(1, j))
        if power.is_zero:
            return out
        out = out + power
    if not (power * a).is_zero:
        raise DomainError("z-series exponential did not terminate within max_terms")
    return out


# ---------------------------------------------------------------------------
# Schur polynomials

_schur_cache: dict = {}


def schur_seq(n_max: int, scale: int = 1) -> list:
    """Return ``[S_0, ..., S_n_max]`` in the p-variables.

    ``scale=2`` yields ``S_i(2p)`` (substitute ``p_k -> 2 p_k``).
    """
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    if scale not in (1, 2):
        raise DomainError("scale must be 1 or 2")
    cached = _schur_cache.get(scale)
    if cached is None or len(cached) <= n_max:
        gen = ZSeries(
            P_VARS,
            {k: GradedPoly.variable(P_VARS, k).scale(scale) for k in range(1, n_max + 1)},
            n_max,
        )
        series = zseries_exp(gen, n_max + 1)
        cached = [series.coeff(i) for i in range(n_max + 1)]
        _schur_cache[scale] = cached
    return cached[: n_max + 1]


def schur_poly(i: int, scale: int = 1) -> GradedPoly:
    """``S_i(p)`` (or ``S_i(2p)``); the zero polynomial for negative ``i``."""
    if i < 0:
        return GradedPoly.zero(P_VARS)
    return schur_seq(i, scale)[i]


# ---------------------------------------------------------------------------
# Bell polynomials

_bell_cache: list = []


def bell_poly(d: int) -> GradedPoly:
    """The complete Bell polynomial ``B_d`` in the abstract x-variables.

    Computed by the recurrence ``B_{d+1} = sum_k C(d, k) B_{d-k} x_{k+1}``;
    partition enumeration is kept only as a test oracle.
    """
    if d < 0:
        raise DomainError("Bell polynomial index must be >= 0")
    if not _bell_cache:
        _bell_cache.append(GradedPoly.const(X_VARS, 1))
    while len(_bell_cache) <= d:
        n = len(_bell_cache) - 1
        acc = GradedPoly.zero(X_VARS)
        for k in range(n + 1):
            xk1 = GradedPoly.variable(X_VARS, k + 1)
            acc = acc + (_bell_cache[n - k] * xk1).scale(comb(n, k))
        _bell_cache.append(acc)
    return _bell_cache[d]


def q_series(i: int, z_cap: int) -> ZSeries:
    """The series ``q_i = -sum_k k^i p_k z^k``.

    For ``i >= 1`` the ``k = 0`` term vanishes identically, so the sum starts
    at ``k = 1``; for ``i = 0`` the ``-p_0`` constant term is included.
    """
    if i < 0:
        raise DomainError("q-series index must be >= 0")
    coeffs = {
        k: GradedPoly.variable(P_VARS, k).scale(-(k**i)) for k in range(1, z_cap + 1)
    }
    if i == 0:
        coeffs[0] = GradedPoly.variable(P_VARS, 0).scale(-1)
    return ZSeries(P_VARS, coeffs, z_cap)


def bell_series_substitute(d: int, series_of: Callable[[int], ZSeries], z_cap: int) -> ZSeries:
    """Evaluate ``B_d`` at ``x_j := series_of(j)`` as a z-series."""
    powers: dict = {}

    def power(j: int, e: int) -> ZSeries:
        key = (j, e)
        if key not in powers:
            base = series_of(j)
            acc = base
            for _ in range(e - 1):
                acc = acc * base
            powers[key] = acc
        return powers[key]

    out = ZSeries.zero(P_VARS, z_cap)
    for m, c in bell_poly(d).items():
        term = ZSeries.const(P_VARS, c, z_cap)
        for j, e in m:
            term = term * power(j, e)
        out = out + term
    return out


_bell_coeff_cache: dict = {}


def bell_coeff_series(d: int, z_cap: int) -> ZSeries:
    """``B_d(q_1, ..., q_d)`` expanded in powers of z.

    The coefficient of ``z^m`` is homogeneous of weight ``m`` in the
    p-variables.
    """
    key = (d, z_cap)
    if key not in _bell_coeff_cache:
        _bell_coeff_cache[key] = bell_series_substitute(
            d, lambda j: q_series(j, z_cap), z_cap
        )
    return _bell_coeff_cache[key]


# ---------------------------------------------------------------------------
# series substitution

def substitute_series(
    outer: GradedPoly,
    images: Mapping[int, GradedPoly],
    *,
    alphabet: Alphabet | None = None,
    weight_cap: int | None = None,
    degree_cap: int | None = None,
) -> GradedPoly:
    """Compose ``outer`` with variable images, truncating at the given caps.

    Every variable occurring in ``outer`` must have an image; the images all
    live in one target alphabet (which may differ from the outer one).
    """
    if alphabet is None:
        for img in images.values():
            alphabet = img.alphabet
            break
    if alphabet is None:
        raise DomainError("substitute_series needs images or an explicit alphabet")
    caps = {"weight_cap": weight_cap, "degree_cap": degree_cap}
    out = GradedPoly.zero(alphabet, **caps)
    power_memo: dict = {}

    def image_power(i: int, e: int) -> GradedPoly:
        key = (i, e)
        if key not in power_memo:
            img = images.get(i)
            if img is None:
                raise DomainError(f"no image supplied for variable index {i}")
            power_memo[key] = img.with_caps(**caps) ** e
        return power_memo[key]

    for m, c in outer.items():
        term = GradedPoly.const(alphabet, c, **caps)
        for i, e in m:
            term = term * image_power(i, e)
            if term.is_zero:
                break
        out = out + term
    return out


# ---------------------------------------------------------------------------
# Faa di Bruno verification

def faa_di_bruno_check(d: int, z_cap: int) -> bool:
    """Check ``(z d/dz)^d E = E * B_d(qhat_1, ..., qhat_d)`` exactly up to
    the z-cap, where ``E = exp(sum_{k>=1} p_k z^k)`` and
    ``qhat_i = sum_{k>=1} k^i p_k z^k``.

    Both sides are computed independently: the left by iterated application
    of the Euler operator to the truncated exponential, the right through the
    Bell polynomial substitution.
    """
    if d < 0:
        raise DomainError("d must be >= 0")
    gen = ZSeries(
        P_VARS,
        {k: GradedPoly.variable(P_VARS, k, weight_cap=z_cap) for k in range(1, z_cap + 1)},
        z_cap,
    )
    exp_series = zseries_exp(gen, z_cap + 1)
    lhs = exp_series
    for _ in range(d):
        lhs = lhs.z_dz()

    def qhat(j: int) -> ZSeries:
        return ZSeries(
            P_VARS,
            {
                k: GradedPoly.variable(P_VARS, k, weight_cap=z_cap).scale(k**j)
                for k in range(1, z_cap + 1)
            },
            z_cap,
        )

    rhs = exp_series * bell_series_substitute(d, qhat, z_cap)
    return lhs == rhs
