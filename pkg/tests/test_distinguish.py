import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aitlab.distinguish import (MC_BLOCK, PolarizationModel, distinguishable, mc_distinguish,
                                min_trials_from_zero, packing_count, packing_curve,
                                packing_points, report, stat_distance, stat_distance_integral,
                                stat_distance_theta, theta_uncertainty, uncertainty)

ARCCOS_06 = 0.9272952180016122  # math.acos(0.6), sqrt(.09) + sqrt(.09) = 0.6

probs = st.floats(0.0, 1.0, allow_nan=False)


# -- uncertainties --------------------------------------------------------

def test_uncertainty_values():
    assert uncertainty(0.0, 7) == 0.0
    assert uncertainty(0.5, 100) == 0.05
    assert uncertainty(0.3, 100) == pytest.approx(0.04582575694955840, abs=1e-15)
    with pytest.raises(ValueError):
        uncertainty(0.5, 0)
    with pytest.raises(ValueError):
        uncertainty(1.5, 10)


def test_theta_uncertainty():
    assert theta_uncertainty(math.pi / 4, 100) == pytest.approx(0.05, abs=1e-15)
    assert theta_uncertainty(math.pi / 4, 400) == pytest.approx(0.025, abs=1e-15)
    assert theta_uncertainty(0.0, 100) == math.inf
    assert theta_uncertainty(math.pi / 2, 100) == math.inf


def test_polarization_model():
    assert PolarizationModel(math.pi / 3).p == pytest.approx(0.25)
    with pytest.raises(ValueError):
        PolarizationModel(4.0)


def test_distinguishable_examples():
    assert distinguishable(0.0, 1.0, 1)
    assert not distinguishable(0.3, 0.3, 10 ** 6)
    assert distinguishable(0.4, 0.6, 100)


def test_distinguishable_monotone_in_m():
    grid = np.linspace(0.0, 1.0, 21)
    ms = [1, 2, 5, 10, 30, 100, 300, 1000, 10 ** 4]
    for p in grid:
        for q in grid:
            verdicts = [distinguishable(p, q, m) for m in ms]
            # once distinguishable, stays distinguishable
            assert verdicts == sorted(verdicts)


# -- distance -------------------------------------------------------------

def test_stat_distance_values():
    assert stat_distance(0.3, 0.3) == 0.0
    assert stat_distance(0.0, 1.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert stat_distance(0.25, 0.75) == pytest.approx(math.pi / 6, abs=1e-15)
    assert stat_distance(0.1, 0.9) == pytest.approx(ARCCOS_06, abs=1e-15)


@given(probs, probs)
def test_stat_distance_symmetric_and_bounded(p, q):
    d = stat_distance(p, q)
    assert d == stat_distance(q, p)
    assert 0.0 <= d <= math.pi / 2


def test_theta_integral_values():
    assert stat_distance_theta(0.3, 0.3) == 0.0
    assert stat_distance_theta(0.0, math.pi / 2) == pytest.approx(math.pi / 2, abs=1e-9)
    with pytest.raises(ValueError):
        stat_distance_theta(0.0, 2.0)


def test_theta_integral_matches_closed_form_on_grid():
    thetas = np.linspace(0.0, math.pi / 2, 10)
    for t1 in thetas:
        for t2 in thetas[thetas >= t1]:
            integral = stat_distance_theta(t1, t2)
            assert integral == pytest.approx(t2 - t1, abs=1e-9)
            closed = stat_distance(math.cos(t1) ** 2, math.cos(t2) ** 2)
            assert integral == pytest.approx(closed, abs=1e-9)


@pytest.mark.parametrize("p, q", [(0.1, 0.9), (0.0, 0.5), (0.5, 1.0), (0.0, 1.0), (0.2, 0.21)])
def test_p_space_integral(p, q):
    assert stat_distance_integral(p, q) == pytest.approx(stat_distance(p, q), abs=1e-9)


# -- packing --------------------------------------------------------------

def test_packing_small_m():
    # 0 -> 1/2 (p = sqrt(p(1-p))) -> 1 (p - 1/2 = 1/2 + 0)
    points = packing_points(0.0, 1.0, 1)
    assert points == pytest.approx([0.0, 0.5, 1.0], abs=1e-11)
    assert packing_count(0.0, 1.0, 1) == 2


def test_packing_steps_satisfy_equality():
    pts = packing_points(0.1, 0.9, 1000)
    for a, b in zip(pts, pts[1:]):
        assert b - a == pytest.approx(uncertainty(a, 1000) + uncertainty(b, 1000), abs=1e-11)


def test_packing_frozen_counts():
    assert [packing_count(0.1, 0.9, m) for m in (10 ** 4, 4 * 10 ** 4)] == [92, 185]


def test_packing_doubles_with_four_times_m():
    for m in (10 ** 4, 4 * 10 ** 4):
        assert abs(packing_count(0.1, 0.9, 4 * m) - 2 * packing_count(0.1, 0.9, m)) <= 2


@pytest.mark.slow
def test_packing_agrees_with_distance_on_random_pairs():
    rng = np.random.default_rng(17)
    done = 0
    while done < 20:
        p1, p2 = sorted(rng.uniform(0, 1, 2))
        if p2 - p1 < 0.2:
            continue
        d = stat_distance(p1, p2)
        assert abs(packing_count(p1, p2, 10 ** 6) / 1000 - d) <= 0.05 * d
        done += 1


def test_packing_curve_rows():
    rows = packing_curve(0.1, 0.9, [100, 10 ** 4])
    assert rows[1] == (10 ** 4, 92, 0.92)


def test_packing_rejects_bad_order():
    with pytest.raises(ValueError):
        packing_points(0.5, 0.5, 10)


# -- trial bound ----------------------------------------------------------

def test_min_trials():
    assert min_trials_from_zero(0.5) == 1
    assert min_trials_from_zero(0.125) == 7
    assert min_trials_from_zero(2.0 ** -20) == 1048575
    for n in range(1, 21):
        assert min_trials_from_zero(2.0 ** -n) == 2 ** n - 1
    with pytest.raises(ValueError):
        min_trials_from_zero(0.0)


def test_report():
    r = report(0.0, 0.125, 7)
    assert r.min_trials == 7 and r.distinguishable
    assert report(0.4, 0.6, 100).min_trials is None


# -- Monte Carlo ----------------------------------------------------------

def test_mc_detection_near_closed_form():
    p2 = 2.0 ** -8
    res = mc_distinguish(p2, 0.0, p2, 255, 10 ** 4, seed=7)
    closed = 1 - (1 - p2) ** 255
    assert closed == pytest.approx(0.6314004029324185, abs=1e-15)
    assert abs(res.detection_rate - closed) <= 0.05
    # any observed one rules out p1 = 0
    assert res.decisions["p2"] == res.detections


def test_mc_degenerate_zero():
    res = mc_distinguish(0.0, 0.0, 2.0 ** -8, 255, 3000, seed=1)
    assert res.decisions == {"p1": 3000, "p2": 0}
    assert res.mean_ones == 0.0 and res.error_rate == 0.0


def test_mc_deterministic_and_thread_independent():
    args = (0.3, 0.3, 0.4, 50, 3 * MC_BLOCK + 17)
    a = mc_distinguish(*args, seed=5)
    b = mc_distinguish(*args, seed=5, threads=4)
    assert a == b
    assert mc_distinguish(*args, seed=6) != a


def test_mc_ties_go_to_p1():
    # with p1 = p2 every likelihood ties
    res = mc_distinguish(0.5, 0.5, 0.5, 10, 100, seed=0)
    assert res.decisions["p1"] == 100


def test_mc_rejects_foreign_truth():
    with pytest.raises(ValueError):
        mc_distinguish(0.2, 0.1, 0.3, 10, 10, seed=0)
