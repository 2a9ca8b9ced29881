import math
from fractions import Fraction

import pytest

from gbcrypt.errors import InvalidParams
from gbcrypt.estimator import (
    OMEGA_MAX,
    EstimatorConfig,
    bits,
    eigenvalue_cost,
    est_ciminion,
    est_hydra,
    first_negative_index,
    hilbert_dreg,
    hilbert_series,
    macaulay_bound,
    render_table,
    round_recommendation,
)


def test_config_validation():
    EstimatorConfig(omega=2)
    EstimatorConfig(omega=OMEGA_MAX)
    for bad in (1.99, 2.5):
        with pytest.raises(InvalidParams):
            EstimatorConfig(omega=bad)
    with pytest.raises(InvalidParams):
        EstimatorConfig(N=0)
    with pytest.raises(InvalidParams):
        est_ciminion(1)
    with pytest.raises(InvalidParams):
        est_hydra(1)


def test_bits_exact():
    assert bits(2**130) == 130
    assert bits(Fraction(1, 2)) == 0.0
    assert bits(1) == 0.0


def test_hilbert_series_small():
    # (1 - t^2)^2 / (1 - t)^2 = (1 + t)^2
    assert hilbert_series(2, 2, 5) == [1, 2, 1, 0, 0]
    assert first_negative_index(2, 2) is None
    # (1 - t^2)^3 / (1 - t)^2 = (1 + t)^2 (1 - t^2) = 1 + 2t - 2t^3 - t^4
    assert hilbert_series(3, 2, 5) == [1, 2, 0, -2, -1]
    assert first_negative_index(3, 2) == 3


def test_hilbert_dreg_examples():
    assert hilbert_dreg(29) == 23
    assert hilbert_dreg(31) == 25
    assert hilbert_dreg(39) == 32


def test_hilbert_dreg_below_macaulay_bound():
    for r in range(2, 65):
        d = hilbert_dreg(r)
        assert d <= macaulay_bound([2] * (2 * r + 2), 2 * r - 2) == 2 * r


def test_macaulay_bound_examples():
    assert macaulay_bound([2, 2, 2], 100) == 4
    # only the n + 1 largest degrees count
    assert macaulay_bound([2] * 10, 9) == 11
    assert macaulay_bound([2] * 12, 9) == 11
    for r in (2, 7, 20):
        assert macaulay_bound([2] * (3 * r), 3 * r) == 3 * r + 1
        assert macaulay_bound([2] * (r - 1), r - 1) == r
        assert macaulay_bound([2] * (2 * r + 2), 2 * r - 2) == 2 * r


def test_round_recommendation():
    assert round_recommendation(34) == 45
    assert round_recommendation(29) == 39
    assert round_recommendation(20) == 30


def test_eigenvalue_cost_matches_geometric_sum():
    # N = 1, omega = 2: the sum over paired iterations collapses to a closed form
    for n in (2, 6, 12):
        assert eigenvalue_cost(n, 2, 1) == Fraction(2 ** 3 * (2 ** (2 * n) - 1), 2 ** 4 - 1)
    for n in (3, 7, 11):
        assert eigenvalue_cost(n, 2, 1) == Fraction(2 ** 5 * (2 ** (2 * (n - 1)) - 1), 2 ** 4 - 1)
    # larger N only adds work
    assert eigenvalue_cost(8, 2, 4) > eigenvalue_cost(8, 2, 1)


@pytest.mark.parametrize("omega", [2, OMEGA_MAX])
def test_ciminion_strictly_increasing(omega):
    cfg = EstimatorConfig(omega=omega)
    prev = None
    for r in range(3, 130):
        cur = est_ciminion(r, cfg).bits
        if prev:
            for k in cur:
                assert cur[k] > prev[k], (r, k)
        prev = cur


@pytest.mark.parametrize("omega", [2, OMEGA_MAX])
def test_hydra_strictly_increasing(omega):
    # below r_H = 5 the semi-regular shift sum of the construction is empty
    cfg = EstimatorConfig(omega=omega)
    prev = None
    for r in range(5, 70):
        cur = est_hydra(r, cfg).bits
        if prev:
            for k in cur:
                assert cur[k] > prev[k], (r, k)
        prev = cur


OMEGA_KEYS = {
    "ciminion": ("eigenvalue", "fully_substituted"),
    "hydra": ("fglm", "eigenvalue", "semi_regular", "boolean_proven_elimination", "boolean_sr_elimination"),
}


@pytest.mark.parametrize("r", [8, 31, 45])
def test_omega_sensitivity(r):
    lo, hi = EstimatorConfig(omega=2), EstimatorConfig(omega=OMEGA_MAX)
    for cipher, fn in (("ciminion", est_ciminion), ("hydra", est_hydra)):
        a, b = fn(r, lo).bits, fn(r, hi).bits
        for k in a:
            if k in OMEGA_KEYS[cipher]:
                assert b[k] > a[k], (cipher, k)
            else:
                assert b[k] == a[k], (cipher, k)
    assert est_ciminion(33, hi)["fully_substituted"] == pytest.approx(130 * OMEGA_MAX / 2, abs=1e-6)


def test_field_size_only_enters_gcd():
    small = EstimatorConfig(q=7741)
    big = EstimatorConfig()
    a, b = est_ciminion(33, small).bits, est_ciminion(33, big).bits
    assert a["eigenvalue"] == b["eigenvalue"]
    assert a["bariant_gcd"] < b["bariant_gcd"]


def test_report_dict_and_table():
    rep = est_hydra(31)
    d = rep.as_dict()
    assert d["cipher"] == "hydra" and d["rounds"] == 31 and d["quantities"]["d_reg"] == 25
    assert rep["fglm"] == pytest.approx(d["bits"]["fglm"], abs=1e-6)
    text = render_table("hydra", [31])
    assert "125.91" in text and "119.09" in text
    text = render_table("ciminion", [33])
    assert "63.09" in text and "130" in text
    with pytest.raises(ValueError):
        render_table("mimc")


def test_quantities():
    rep = est_ciminion(10)
    assert rep.quantities["quotient_dim"] == 2 ** 9
    assert rep.quantities["macaulay_bound"] == 10
    rep = est_hydra(5)
    assert rep.quantities["n_vars"] == 8 and rep.quantities["n_quadratics"] == 12
    assert rep.quantities["quotient_dim_bound"] == 2 ** 8
    assert rep.quantities["proven_solving_degree"] == 10
    assert not math.isnan(rep.bits["fglm"])


def test_summary_discrepancy_is_reported():
    cfg = EstimatorConfig(q=2**127 + 45, omega=2)
    for r in (31, 33, 39):
        rep = est_hydra(r, cfg)
        assert any("summary listing" in n for n in rep.notes), r
    assert not any("summary listing" in n for n in est_hydra(32, cfg).notes)
