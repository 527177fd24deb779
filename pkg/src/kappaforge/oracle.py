"""Three independent routes to kappa-side quantities, used to cross-validate
the operator recursion.

* the set-partition formula: ``[prod kappa_{k_i - 1}]_g`` as a signed sum of
  psi-brackets over all partitions of the index set, with block exponents
  ``alpha_j - |P_j| + 1`` and sign ``(-1)^{n + #blocks}``;
* the change of variables ``t_i = -S_{i-1}(-p)`` (with ``u = e^{p_0}``,
  ``t_0 = t_1 = 0``) turning the point potential into the kappa-potential
  sector by sector;
* the fork flow: translating the arguments of the positive-genus point
  potential by the series ``f_i(s)`` encoded in
  ``sum_i t_i z^i = [z (1 - exp(-sum_k s_k z^{k-1}))]_+``
  produces the omega-potential, whose brackets are kappa numbers after the
  index shift ``s_{k} -> kappa_{k-1}``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator

from .algebra import (
    GradedPoly,
    Mono,
    P_VARS,
    S_VARS,
    T_VARS,
    UNIT,
    make_mono,
    mono_degree,
    mono_exp,
    mono_mul,
    mono_quotient,
)
from .combinat import compositions_into_parts, exponent_norm, partitions
from .errors import DomainError, ResourceLimitError
from .genfun import ZSeries, schur_poly, substitute_series, zseries_exp
from .kappa import KappaEngine, KappaKey
from .psi import PsiEngine


# ---------------------------------------------------------------------------
# set partitions


def iter_set_partitions(n: int) -> Iterator[tuple]:
    """All set partitions of ``range(n)`` as tuples of blocks, enumerated
    through restricted growth strings (canonical and duplicate-free)."""
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def rec(i: int, nblocks: int):
        if i == n:
            blocks = [[] for _ in range(nblocks)]
            for elem, b in enumerate(rgs):
                blocks[b].append(elem)
            yield tuple(tuple(b) for b in blocks)
            return
        for b in range(nblocks):
            rgs[i] = b
            yield from rec(i + 1, nblocks)
        rgs[i] = nblocks
        yield from rec(i + 1, nblocks + 1)

    yield from rec(1, 1)


def _visit_block_profiles(ks, visit: Callable) -> None:
    """Drive ``visit(sums, sizes, nblocks)`` over every set partition of the
    index set of ``ks``, carrying per-block sums and sizes incrementally.

    Restricted-growth enumeration: element ``i`` joins an existing block or
    opens the next one.
    """
    n = len(ks)
    sums = [0] * n
    sizes = [0] * n

    def rec(i: int, nblocks: int):
        if i == n:
            visit(sums, sizes, nblocks)
            return
        k = ks[i]
        for b in range(nblocks):
            sums[b] += k
            sizes[b] += 1
            rec(i + 1, nblocks)
            sums[b] -= k
            sizes[b] -= 1
        sums[nblocks] = k
        sizes[nblocks] = 1
        rec(i + 1, nblocks + 1)

    if n:
        sums[0] = ks[0]
        sizes[0] = 1
        rec(1, 1)
    else:
        visit(sums, sizes, 0)


def kappa_via_partitions(
    psi_engine: PsiEngine,
    genus: int,
    ks,
    *,
    partition_limit: int = 10,
) -> Fraction:
    """``[prod kappa_{k_i - 1}]_g`` via the set-partition formula.

    Each partition P of the n indices contributes
    ``(-1)^{n + len(P)} < prod_j tau_{alpha_j - |P_j| + 1} >_{g, len(P)}``
    with ``alpha_j`` the sum of the ``k_i`` over the block; blocks driven to
    a negative exponent contribute nothing.
    """
    ks = [int(k) for k in ks]
    if genus < 1:
        raise DomainError("the partition formula needs genus >= 1")
    if any(k < 1 for k in ks):
        raise DomainError("partition-formula inputs are the k_i >= 1 (kappa_{k-1} factors)")
    n = len(ks)
    if n > partition_limit:
        raise ResourceLimitError(
            f"{n} factors exceed the partition enumeration limit {partition_limit}"
        )
    if sum(ks) != 3 * genus - 3 + n:
        return Fraction(0)

    counts: dict = {}

    def visit(sums, sizes, nblocks):
        exps = []
        for b in range(nblocks):
            e = sums[b] - sizes[b] + 1
            if e < 0:
                return
            exps.append(e)
        exps.sort()
        key = tuple(exps)
        sign = 1 if (n + nblocks) % 2 == 0 else -1
        counts[key] = counts.get(key, 0) + sign

    _visit_block_profiles(ks, visit)
    total = Fraction(0)
    for exps, count in counts.items():
        if count:
            total += count * psi_engine.psi_number(genus, exps)
    return total


# ---------------------------------------------------------------------------
# change of variables


def kappa_substitution_images(max_index: int) -> dict:
    """Images ``t_i -> -S_{i-1}(-p)`` for ``2 <= i <= max_index``."""
    return {
        i: schur_poly(i - 1).alternate_signs().scale(-1) for i in range(2, max_index + 1)
    }


def kappa_via_substitution(psi_engine: PsiEngine, max_genus: int) -> dict:
    """Recover the kappa table for genus up to the bound by substituting the
    change of variables into the point potential, sector by sector.

    Only bracket keys with every exponent >= 2 survive ``t_0 = t_1 = 0``.
    Returns ``{KappaKey: value}`` comparable entry by entry with the
    recursion table.
    """
    if max_genus < 2:
        raise DomainError("the substitution route starts at genus 2")
    table: dict = {}
    for genus in range(2, max_genus + 1):
        weight = 3 * genus - 3
        images = kappa_substitution_images(weight + 1)
        outer_terms: dict = {}
        for parts in range(1, weight + 1):
            for comp in compositions_into_parts(weight + parts, parts, 2):
                value = psi_engine.psi_number(genus, comp)
                if not value:
                    continue
                mono = make_mono([(k, 1) for k in comp])
                outer_terms[mono] = value / exponent_norm(mono)
        outer = GradedPoly(T_VARS, outer_terms)
        image_poly = substitute_series(
            outer, images, alphabet=P_VARS, weight_cap=weight
        )
        for part in partitions(weight):
            mono = make_mono([(i, 1) for i in part])
            table[KappaKey(genus, mono)] = image_poly.coeff(mono) * exponent_norm(mono)
    return table


# ---------------------------------------------------------------------------
# fork flow


def fork_images(degree_cap: int, max_index: int) -> dict:
    """The argument-translation series ``f_i(s)`` for ``0 <= i <= max_index``,
    truncated at total s-degree ``degree_cap``.

    ``f_i`` is ``delta_{i,1}`` minus the ``z^{i-1}`` coefficient of
    ``exp(-sum_k s_k z^{k-1})``; the ``z^{-1}`` strand (all powers of
    ``s_0``) makes the series Laurent, so the exponential is taken with
    enough z-headroom that no term can re-enter the window.
    """
    if degree_cap < 1:
        raise DomainError("degree_cap must be >= 1")
    z_top = max_index - 1 + degree_cap
    body = ZSeries(
        S_VARS,
        {
            k - 1: GradedPoly.variable(S_VARS, k, degree_cap=degree_cap).scale(-1)
            for k in range(0, z_top + 2)
        },
        z_top,
    )
    series = zseries_exp(body, degree_cap + 1)
    images = {}
    for i in range(max_index + 1):
        poly = -series.coeff(i - 1)
        if i == 1:
            poly = poly + GradedPoly.const(S_VARS, 1, degree_cap=degree_cap)
        images[i] = poly.with_caps(degree_cap=degree_cap)
    return images


def omega_via_fork(psi_engine: PsiEngine, max_genus: int, degree_cap: int) -> dict:
    """Brackets ``<omega^K>_g`` obtained by translating the arguments of the
    positive-genus point potential by the fork series and restricting to
    ``t = 0``.

    Returns ``{(genus, s-monomial): value}`` for total s-degree up to the
    cap; per the pushforward to the unpointed space these must equal kappa
    numbers with every index shifted down by one.
    """
    if max_genus < 1:
        raise DomainError("the fork route starts at genus 1")
    images = fork_images(degree_cap, 3 * max_genus - 3 + degree_cap)
    out: dict = {}
    for genus in range(1, max_genus + 1):
        outer_terms: dict = {}
        for parts in range(1, degree_cap + 1):
            if 2 * genus - 2 + parts <= 0:
                continue
            weight = 3 * genus - 3 + parts
            if weight < 0:
                continue
            for comp in compositions_into_parts(weight, parts, 0):
                value = psi_engine.psi_number(genus, comp)
                if not value:
                    continue
                mono = make_mono([(k, 1) for k in comp])
                outer_terms[mono] = value / exponent_norm(mono)
        outer = GradedPoly(T_VARS, outer_terms)
        sector = substitute_series(
            outer, images, alphabet=S_VARS, degree_cap=degree_cap
        )
        for mono, c in sector.items():
            out[(genus, mono)] = c * exponent_norm(mono)
    return out


def omega_expected_from_kappa(kappa_engine: KappaEngine, genus: int, s_mono: Mono) -> Fraction:
    """The kappa-side prediction for ``<omega^K>_g`` at an s-monomial.

    Any ``s_0`` factor kills the bracket (forgetting the extra point has
    positive-dimensional fibers); otherwise shift indices down by one, with
    ``s_1`` factors becoming kappa_0 powers.
    """
    if mono_exp(s_mono, 0):
        return Fraction(0)
    kappa0 = mono_exp(s_mono, 1)
    pairs = tuple((i - 1, e) for i, e in s_mono if i >= 2)
    if genus == 1:
        if not pairs and kappa0 == 1:
            return Fraction(1, 24)
        return Fraction(0)
    return kappa_engine.kappa_number(genus, pairs, kappa0_power=kappa0)


def fork_expansion_check(psi_engine: PsiEngine, max_genus: int, degree_cap: int) -> bool:
    """Spot-check the argument-translation shortcut against a direct
    term-by-term expansion of the exponential of the fork vector field.

    Only practical for small total s-degree; compares all omega-potential
    coefficients with degree up to the cap.
    """
    max_t_index = 3 * max_genus - 3 + degree_cap
    # the vector field: coefficient (-1)^{n-1}/prod(mult!) on s^mu d/dt_j,
    # where n = deg(mu) and j = (sum of indices) - n + 1
    field = []
    for n in range(1, degree_cap + 1):
        for total in range(0, max_t_index + n):
            for comp in compositions_into_parts(total, n, 0):
                j = total - n + 1
                if j < 0 or j > max_t_index:
                    continue
                mono = make_mono([(k, 1) for k in comp])
                c = Fraction(-1 if n % 2 == 0 else 1, exponent_norm(mono))
                field.append((mono, j, c))

    state: dict = {}
    for genus in range(1, max_genus + 1):
        for parts in range(1, degree_cap + 1):
            if 2 * genus - 2 + parts <= 0:
                continue
            weight = 3 * genus - 3 + parts
            if weight < 0:
                continue
            for comp in compositions_into_parts(weight, parts, 0):
                value = psi_engine.psi_number(genus, comp)
                if not value:
                    continue
                mono = make_mono([(k, 1) for k in comp])
                state[(genus, mono, UNIT)] = value / exponent_norm(mono)

    def apply_field(current: dict) -> dict:
        nxt: dict = {}
        for (genus, t_mono, s_mono), v in current.items():
            for mu, j, c in field:
                e = mono_exp(t_mono, j)
                if not e:
                    continue
                s_new = mono_mul(s_mono, mu)
                if mono_degree(s_new) > degree_cap:
                    continue
                key = (genus, mono_quotient(t_mono, ((j, 1),)), s_new)
                nxt[key] = nxt.get(key, Fraction(0)) + v * c * e
        return {k: v for k, v in nxt.items() if v}

    acc = dict(state)
    current = state
    for r in range(1, degree_cap + 1):
        current = {k: v / r for k, v in apply_field(current).items()}
        if not current:
            break
        for key, v in current.items():
            acc[key] = acc.get(key, Fraction(0)) + v

    direct = {
        (genus, s_mono): v
        for (genus, t_mono, s_mono), v in acc.items()
        if t_mono == UNIT and v
    }
    translated_raw = omega_via_fork(psi_engine, max_genus, degree_cap)
    translated = {
        key: value / exponent_norm(key[1]) for key, value in translated_raw.items() if value
    }
    return direct == translated
