import random

import numpy as np
import pytest
from conftest import brute_zeros

from gbcrypt import hydra as hyd
from gbcrypt.algebra import PrimeField
from gbcrypt.errors import InvalidParams
from gbcrypt.estimator import macaulay_bound
from gbcrypt.mpoly import TermOrder, buchberger, is_generic_coordinates_small, is_groebner, quotient_basis, reduce

Q = 7741


def instance(r_H, q=Q, seed=b"h", data_seed=2, **kw):
    params = hyd.HydraParams.generate(PrimeField(q), r_H, seed=seed, **kw)
    rng = random.Random(data_seed)
    k = [rng.randrange(q) for _ in range(4)]
    y = [rng.randrange(q) for _ in range(4)]
    z = [rng.randrange(q) for _ in range(4)]
    return params, hyd.make_sample(params, k, y, z)


def naive_sample(params, k, y, z):
    # vectorised evaluator with object arrays, independent of head_round/rolling
    q = params.field.q
    MJ = np.array(params.M_J, dtype=object)
    ME = np.array(params.M_E, dtype=object)
    MI = np.array(params.M_I, dtype=object)
    k = np.array(k, dtype=object)
    kp = np.concatenate([k, ME.dot(k)]) % q
    sign = np.array([1, 1, 1, 1, -1, -1, -1, -1], dtype=object)

    def H(s):
        for c in params.constants:
            f = int(sign.dot(s)) ** 2
            s = (MJ.dot(s + f) + kp + np.array(c, dtype=object)) % q
        return s

    s0 = np.array(list(y) + list(z), dtype=object) % q
    ys, zs = s0[:4], s0[4:]
    a = np.array([1, -1, 1, -1], dtype=object)
    b = np.array([1, 1, -1, -1], dtype=object)
    gy = int(a.dot(ys)) * int(b.dot(zs))
    gz = int(a.dot(zs)) * int(b.dot(ys))
    s1 = (np.concatenate([MI.dot(ys + gy), MI.dot(zs + gz)]) + np.array(params.c_R, dtype=object)) % q
    return [int(v) for v in (H(s0) + s0) % q], [int(v) for v in (H(s1) + s1) % q]


def test_heads_against_independent_evaluator():
    params, _ = instance(3)
    rng = random.Random(7)
    for _ in range(100):
        k, y, z = ([rng.randrange(Q) for _ in range(4)] for _ in range(3))
        assert list(hyd.heads_sample(params, k, y, z)) == list(naive_sample(params, k, y, z))


def test_degenerate_inputs():
    F = PrimeField(Q)
    base = hyd.HydraParams.generate(F, 2)
    params = hyd.HydraParams(F, 2, base.M_E, base.M_I, base.M_J, ((0,) * 8, (0,) * 8))
    zero = [0] * 4
    c1, c2 = hyd.heads_sample(params, zero, zero, zero)
    assert c1 == [0] * 8 and c2 == [0] * 8
    assert [c1, c2] == list(naive_sample(params, zero, zero, zero))


def test_params_validation():
    F = PrimeField(Q)
    with pytest.raises(InvalidParams):
        hyd.HydraParams.generate(F, 1)
    with pytest.raises(InvalidParams):
        hyd.HydraParams.generate(F, 2, M_E=[[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_model_counts_and_witness():
    params, sample = instance(2)
    model = hyd.build_model(params, sample)
    assert len(model.system) == 40 and model.ring.n == 36
    assert not any(model.system.evaluate(model.witness()))
    params, sample = instance(4)
    model = hyd.build_model(params, sample)
    assert len(model.system) == 16 * 4 + 8 and model.ring.n == 16 * 4 + 4
    assert not any(model.system.evaluate(model.witness()))


def test_wrong_key_residual():
    params, sample = instance(2)
    model = hyd.build_model(params, sample)
    rng = random.Random(5)
    for _ in range(10):
        bad = list(sample.key)
        bad[rng.randrange(4)] = (bad[0] + rng.randrange(1, Q)) % Q
        if bad == list(sample.key):
            continue
        assert any(model.system.evaluate(model.witness(k=bad)))


def test_transform_degree_pattern_and_witness():
    r = 3
    params, sample = instance(r)
    model = hyd.build_model(params, sample)
    G = hyd.transform(model)
    degs = [p.degree() for p in G]
    for b in range(2 * r + 1):
        block = degs[8 * b: 8 * b + 8]
        if b == r:
            assert block[3] == 2 and block[7] == 2
            assert all(d <= 1 for j, d in enumerate(block) if j not in (3, 7))
        else:
            assert block[:7] == [1] * 7 and block[7] == 2
    assert not any(G.evaluate(model.witness()))


def test_transform_same_ideal():
    params, sample = instance(2)
    model = hyd.build_model(params, sample)
    G = hyd.transform(model)
    o = model.order
    B = buchberger(model.system, o)
    assert all(reduce(g, B, o).is_zero() for g in G)
    B2 = buchberger(G, o)
    assert all(reduce(f, B2, o).is_zero() for f in model.system)


@pytest.mark.parametrize("r", [2, 3, 5])
def test_rank_identities(r):
    params, sample = instance(r)
    G = hyd.transform(hyd.build_model(params, sample))
    rank, full = hyd.generic_coordinates_check(G, params)
    assert full and rank == 16 * r + 4
    _, elim = hyd.eliminate_affine(G)
    assert len([c for c in elim.pivots if c < G.ring.n]) == 14 * r + 6


def test_rank_cross_check_small():
    params, sample = instance(2)
    G = hyd.transform(hyd.build_model(params, sample))
    assert hyd.generic_coordinates_check(G, params)[1]
    assert is_generic_coordinates_small(G)


def test_constants_do_not_affect_rank():
    ranks = set()
    for seed in (b"a", b"b"):
        for c_R in (None, [3, 1, 4, 1, 5, 9, 2, 6]):
            params, sample = instance(3, seed=seed, c_R=c_R)
            ranks.add(hyd.generic_coordinates_check(hyd.transform(hyd.build_model(params, sample)), params))
    assert ranks == {(52, True)}


def test_rank_check_reports_without_raising():
    # a different invertible M_J still yields a rank, full or not
    rng = random.Random(11)
    F = PrimeField(Q)
    while True:
        MJ = [[rng.randrange(3) for _ in range(8)] for _ in range(8)]
        try:
            params = hyd.HydraParams.generate(F, 2, M_J=MJ)
            break
        except InvalidParams:
            continue
    sample = hyd.make_sample(params, [1, 2, 3, 4], [5, 6, 7, 8], [9, 10, 11, 12])
    rank, full = hyd.generic_coordinates_check(hyd.transform(hyd.build_model(params, sample)), params)
    assert 0 < rank <= 36 and full == (rank == 36)


@pytest.mark.parametrize("r", [2, 3])
def test_eliminate_affine_counts(r):
    params, sample = instance(r)
    model = hyd.build_model(params, sample)
    reduced, elim = hyd.eliminate_affine(hyd.transform(model))
    assert len(reduced) == 2 * r + 2 and reduced.ring.n == 2 * r - 2
    w = model.witness()
    assert not any(reduced.evaluate(elim.project(w)))
    assert elim.lift(elim.project(w)) == w
    assert macaulay_bound([p.degree() for p in reduced], reduced.ring.n) == 2 * r


@pytest.mark.parametrize("r", [2, 3])
def test_change_of_coordinates(r):
    params, sample = instance(r)
    red = hyd.reduce_model(hyd.build_model(params, sample))
    m = 2 * r - 2
    o = TermOrder.drl(m)
    assert len(red.gb) == m and len(red.extras) == 4
    for i, g in enumerate(red.gb):
        assert g.lm(o) == tuple(2 if j == i else 0 for j in range(m))
    assert is_groebner(red.gb, o, skip_coprime=False)
    assert len(quotient_basis(red.gb, o)) <= 2 ** m
    xh = red.hat_witness()
    assert not any(red.combined().evaluate(xh))
    k, y, z = red.key_and_state(xh)
    assert tuple(k) == sample.key and tuple(y) == sample.y and tuple(z) == sample.z
    # applying the substitution to the reduced system reproduces gb
    by_tag = dict(zip(red.reduced.tags, red.reduced.polys))
    for t, g in zip(red.change.selected, red.gb):
        assert red.change.apply(by_tag[t]).monic(o) == g


def test_pullback_of_any_common_zero():
    # small q keeps brute force feasible
    params, sample = instance(2, q=31)
    model = hyd.build_model(params, sample)
    red = hyd.reduce_model(model)
    pts = brute_zeros(list(red.combined()), 31, 2)
    assert tuple(red.hat_witness()) in pts
    for p in pts:
        assert not any(model.system.evaluate(red.pullback(p)))
