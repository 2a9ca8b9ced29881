import math
import random

import pytest

from gbcrypt import hydra as hyd
from gbcrypt.algebra import PrimeField
from gbcrypt.budget import Budget
from gbcrypt.errors import BudgetExceeded, NotBoolean, NotFoundWithin
from gbcrypt.macaulay import (
    build_boolean_macaulay,
    build_macaulay,
    dreg_small,
    extract_gb,
    rowspace,
    solving_degree_search,
)
from gbcrypt.mpoly import PolyRing, TermOrder, buchberger, is_groebner
from gbcrypt.mpoly.poly import mono_divides


def ring(n, q=7):
    return PolyRing(PrimeField(q), [f"x{i}" for i in range(1, n + 1)])


def test_build_macaulay_examples():
    R = ring(1)
    o = TermOrder.drl(1)
    M = build_macaulay([R("x1^2 - 1")], 2, o)
    assert M.columns == [(2,), (1,), (0,)] and M.matrix.tolist() == [[1, 0, 6]]
    M = build_macaulay([R("x1^2 - 1")], 3, o)
    assert M.shape == (2, 4)
    with pytest.raises(ValueError):
        build_macaulay([R("x1^2 - 1")], 1, o)


def test_macaulay_shape_bounds():
    R = ring(3, 31)
    o = TermOrder.drl(3)
    F = [R("x1^2 + x2 - 1"), R("x2*x3 + 4"), R("x3^2 + x1")]
    for d in (2, 3, 4):
        M = build_macaulay(F, d, o)
        assert M.shape[0] == 3 * math.comb(3 + d - 2, d - 2)
        assert M.shape[1] == math.comb(3 + d, d)


def test_boolean_macaulay_examples():
    R = ring(2)
    o = TermOrder.drl(2)
    Fb = [R("x1^2"), R("x2^2")]
    M = build_boolean_macaulay([R("x1*x2 + 1")], Fb, 2, o)
    assert sorted(M.columns) == sorted([(1, 1), (1, 0), (0, 1), (0, 0)])
    M = build_boolean_macaulay([R("x1^2*x2")], Fb, 3, o)
    assert all(v == 0 for v in M.matrix.tolist()[0])
    with pytest.raises(NotBoolean):
        build_boolean_macaulay([R("x1")], [R("x1^2")], 2, o)


def test_rowspace_examples():
    R = ring(2)
    o = TermOrder.drl(2)
    assert list(rowspace(build_macaulay([R("2*x1^2 + 4")], 2, o))) == [R("x1^2 + 2")]
    M = build_macaulay([R("x1^2 + x2"), R("3*x1^2 + 3*x2")], 2, o)
    assert len(rowspace(M)) == 1
    assert set(rowspace(build_macaulay([R("x1 + x2"), R("x1 - x2")], 1, o))) == {R("x1"), R("x2")}


def test_extract_gb_examples():
    R = ring(2)
    o = TermOrder.drl(2)
    G = extract_gb([R("x2^2 - 1"), R("x1 - x2")], None, o)
    assert G is not None and set(G) == {R("x2^2 - 1"), R("x1 - x2")}
    rows = [R("x1^2"), R("x1*x2"), R("x2^2")]
    G = extract_gb(rows, [R("x1^2"), R("x2^2")], o)
    assert G is not None and is_groebner(G, o)


def test_extract_gb_not_yet():
    R = ring(2, 31)
    o = TermOrder.drl(2)
    F = [R("x1^2 + 3*x2 + 1"), R("x2^2 + 5*x1*x2 + x1")]
    res = solving_degree_search(F, o, 8)
    rows = rowspace(build_macaulay(F, res.degree, o))
    low = [f for f in rows if f.degree() < res.degree]
    assert extract_gb(low, None, o) is None
    if res.degree > 2:
        assert extract_gb(rowspace(build_macaulay(F, res.degree - 1, o)), None, o) is None


def _lm_oracle_degree(F, o, d_max):
    # least d whose row space realises every leading monomial of the reduced GB
    lms = [g.lm(o) for g in buchberger(F, o)]
    for d in range(max(f.degree() for f in F), d_max + 1):
        have = {f.lm(o) for f in rowspace(build_macaulay(F, d, o))}
        if all(any(mono_divides(h, m) for h in have) for m in lms):
            return d
    return None


def test_solving_degree_matches_oracle():
    q = 31
    R = ring(2, q)
    o = TermOrder.drl(2)
    rng = random.Random(3)
    checked = 0
    while checked < 15:
        F = []
        for _ in range(2):
            f = R.zero()
            for m in [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]:
                f = f + R.const(rng.randrange(q)).mul_term(m, 1)
            F.append(f)
        if any(f.degree() < 2 for f in F):
            continue
        if math.isinf(dreg_small(F)):
            continue
        res = solving_degree_search(F, o, 10)
        assert res.degree == _lm_oracle_degree(F, o, 10)
        assert is_groebner(res.gb, o)
        checked += 1


def test_solving_degree_of_gb_is_max_degree():
    R = ring(2)
    o = TermOrder.drl(2)
    res = solving_degree_search([R("x1^2 - 1"), R("x2^3 - x1")], o, 5)
    assert res.degree == 3 and len(res.records) == 1


def test_solving_degree_limits():
    R = ring(2)
    o = TermOrder.drl(2)
    with pytest.raises(NotFoundWithin):
        solving_degree_search([R("x1*x2 - 1"), R("x1^2 - 1")], o, 2)
    F = [R("x1^2 + 3*x2 + 1"), R("x2^2 + 5*x1*x2 + x1")]
    with pytest.raises(BudgetExceeded):
        solving_degree_search(F, o, 6, budget=Budget(ops=1))


def test_dreg_small_examples():
    R = ring(2)
    assert dreg_small([R("x1^2"), R("x2^2")]) == 3
    assert dreg_small([R("x1"), R("x2")]) == 1
    assert dreg_small([R("x1*x2")]) == math.inf
    assert dreg_small([R("x1^2 + x2 + 1"), R("x2^2 - x1")]) == 3


def _hydra_combined(r, q=7741):
    params = hyd.HydraParams.generate(PrimeField(q), r, seed=b"m")
    sample = hyd.make_sample(params, [1, 2, 3, 4], [5, 6, 7, 8], [9, 10, 11, 12])
    return hyd.reduce_model(hyd.build_model(params, sample))


def test_boolean_hydra_small():
    red = _hydra_combined(2)
    o = TermOrder.drl(red.gb.ring.n)
    F = red.combined()
    b = solving_degree_search(F, o, 6, F_bool=red.gb, closure=True)
    p = solving_degree_search(F, o, 8, closure=True)
    assert b.degree <= p.degree
    assert is_groebner(b.gb, o) and is_groebner(p.gb, o)
    # both describe the same ideal
    assert {g.lm(o) for g in b.gb} == {g.lm(o) for g in p.gb}


def test_boolean_row_bound_and_extraction():
    red = _hydra_combined(3)
    o = TermOrder.drl(red.gb.ring.n)
    n = red.gb.ring.n
    extras = list(red.extras)
    for d in (2, 3, 4):
        M = build_boolean_macaulay(extras, red.gb, d, o)
        assert M.shape[0] <= len(extras) * sum(math.comb(n, i) for i in range(d - 2 + 1))
        assert M.shape[1] <= sum(math.comb(n, i) for i in range(d + 1))
    res = solving_degree_search(extras, o, 6, F_bool=red.gb, closure=True)
    assert res.degree == 3 and is_groebner(res.gb, o)


def test_dreg_recomputed_hydra_r3():
    assert dreg_small(_hydra_combined(3).combined()) == 3
