"""Concurrent queries must give bit-identical results to sequential ones."""

import random
from concurrent.futures import ThreadPoolExecutor

from kappaforge.kappa import KappaEngine
from kappaforge.psi import PsiEngine


def test_concurrent_psi_queries_match_sequential():
    sequential = PsiEngine()
    keys = list(sequential.iter_keys(3, 5))
    expected = {k: sequential.psi_number(k.genus, k.exponents) for k in keys}

    shared = PsiEngine()
    shuffled = keys[:]
    random.Random(7).shuffle(shuffled)
    with ThreadPoolExecutor(max_workers=8) as pool:
        values = list(
            pool.map(lambda k: shared.psi_number(k.genus, k.exponents), shuffled)
        )
    assert dict(zip(shuffled, values)) == expected


def test_concurrent_kappa_queries_match_sequential():
    table = KappaEngine().solve(3)
    shared = KappaEngine()
    items = list(table.items())
    random.Random(11).shuffle(items)
    with ThreadPoolExecutor(max_workers=6) as pool:
        outcomes = list(
            pool.map(
                lambda kv: shared.kappa_number(
                    kv[0].genus, kv[0].exponents, kappa0_power=kv[0].kappa0_power
                )
                == kv[1],
                items,
            )
        )
    assert all(outcomes)


def test_query_order_does_not_change_values():
    a = PsiEngine()
    b = PsiEngine()
    keys = list(a.iter_keys(2, 5))
    forward = {k: a.psi_number(k.genus, k.exponents) for k in keys}
    backward = {k: b.psi_number(k.genus, k.exponents) for k in reversed(keys)}
    assert forward == backward
