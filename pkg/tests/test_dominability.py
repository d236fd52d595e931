import cmath
import math

import numpy as np
import pytest

from ratmoduli import dominability as dom
from ratmoduli import invariants as inv
from ratmoduli.errors import ChartSingular, OnResultantLocus
from ratmoduli.ratmap import act, make_map
from ratmoduli.suites import random_a, random_group_element, trial_rng

import oracles

P = dom.EtaPoint


def test_eta0_examples():
    assert dom.eta0(P(0, 0)).distance(make_map([1, 0, 0, 0], [0, 0, 0, 1])) < 1e-15
    assert dom.eta0(P(1, 0)).distance(make_map([1, 0, -1, 0], [0, 0, 0, 1])) < 1e-15
    assert inv.classify(dom.eta0(P(0, 0))).stratum == "TwoValues"
    assert inv.classify(dom.eta0(P(1, 0))).stratum == "ThreeValues"
    with pytest.raises(OnResultantLocus):
        dom.eta0(P(1, 1))


def test_eta0_pi_depends_on_product():
    assert dom.eta0_pi(P(2, 0.5j)) == pytest.approx(dom.eta0_pi(P(1j, 1)), rel=1e-10)
    for ab in (0.3 + 0.2j, 4 - 1j, -2.5):
        assert dom.eta0_pi(P(ab, 1)) == pytest.approx(inv.classify(dom.eta0(P(ab, 1))).pi, rel=1e-8)


def test_tangent_matrix_examples():
    m = dom.tangent_matrix(P(0, 0))
    assert np.array_equal(m[0], [6, 0, 0, 0, 0, 0, 0])
    assert np.array_equal(dom.tangent_matrix(P(5, 1), as_printed=True)[5], [0, 0, 0, 0, 1, 0, 5])
    assert np.array_equal(dom.tangent_matrix(P(5, 1))[5], [0, 0, 0, 0, 1, 0, -5])


def test_transversality_examples():
    assert dom.check_transversality(P(0, 0))
    assert dom.check_transversality(P(2, 3j))
    assert oracles.rank_exact(dom.transversality_stack(P(0, 0))) == 7
    assert oracles.rank_exact(dom.transversality_stack(P(2, 3j))) == 7


def test_transversality_drops_at_ab_nine():
    # the critical points of eta0 coalesce at ab = 9
    assert not dom.check_transversality(P(3, 3))
    assert oracles.rank_exact(dom.transversality_stack(P(3, 3))) == 6


def test_transversality_random():
    rng = np.random.default_rng(0)
    for _ in range(100):
        a, b = (complex(*rng.uniform(-7, 7, 2)) for _ in range(2))
        if abs(a * b - 1) < 1e-6:
            continue
        assert dom.check_transversality(P(a, b))


def test_finite_difference_rows():
    rep = dom.finite_difference_tangent_check(P(1, 2), 1e-5)
    assert rep["max_deviation"] < 1e-6
    # the last row as printed disagrees with the derivative
    assert rep["printed_sign_row_deviation"][5] > 0.5
    assert np.array_equal(dom.finite_difference_row(P(1, 2), np.zeros((2, 2)), "right"), np.zeros(7))
    with pytest.raises(ValueError):
        dom.finite_difference_tangent_check(P(1, 2), 1e-3)


def test_chart_singular():
    with pytest.raises(ChartSingular):
        dom.chart(make_map([0, 0, 0, 1], [1, 0, 0, 0]))


def test_omega_examples():
    assert dom.omega(0, 2 + 1j) == 2 + 1j
    assert dom.omega(3 - 1j, 0) == 0
    for x, y in ((1e-5, 2), (0.5, 0.3), (2 + 1j, -1j)):
        assert dom.omega(x, y) == pytest.approx(oracles.omega_direct(x, y), rel=1e-12)
    # the derivative in y is e^{xy}
    x, y, h = 0.7 - 0.2j, 1.1, 1e-6
    der = (dom.omega(x, y + h) - dom.omega(x, y - h)) / (2 * h)
    assert der == pytest.approx(cmath.exp(x * y), rel=1e-8)


def test_omega_misses_minus_one_over_x():
    x = 0.8 + 0.3j
    grid = [complex(re, im) for re in np.linspace(-6, 6, 41) for im in np.linspace(-6, 6, 41)]
    assert min(abs(dom.omega(x, y) + 1 / x) for y in grid) > 0


def test_chi_examples():
    assert dom.chi(0, 0) == (0, 0)
    h = 1e-6
    jac = np.array([[(dom.chi(h, 0)[k] - dom.chi(-h, 0)[k]) / (2 * h) for k in range(2)],
                    [(dom.chi(0, h)[k] - dom.chi(0, -h)[k]) / (2 * h) for k in range(2)]]).T
    assert np.allclose(np.abs(jac), np.eye(2), atol=1e-8)
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        y = dom.chi_preimage(a, b)
        x2, b2 = dom.chi(a, y)
        assert x2 == a and abs(b2 - b) < 1e-9
        assert abs(a * b2 - 1) > 0


def test_composition_rank():
    assert dom.composition_rank(np.zeros(8)) == 7
    rng = np.random.default_rng(2)
    v = 0.3 * (rng.normal(size=8) + 1j * rng.normal(size=8))
    assert dom.composition_rank(v) == 7


def test_eta0_representative_null_fibre():
    assert dom.eta0_orbit_representative(make_map([1, 0, 0, 0], [0, 0, 0, 1])) == P(0, 0)
    assert dom.eta0_orbit_representative(make_map([1, 0, -1, 0], [0, 0, 0, 1])) == P(1, 0)


def test_eta0_representative_f1():
    rep = dom.eta0_orbit_representative(inv.standard_form(1))
    assert abs(dom.eta0_pi(rep) - inv.pi_of_a(1)) < 1e-7


def test_eta0_representative_random():
    rng = trial_rng(21, 0)
    for _ in range(10):
        f = act(random_group_element(rng), inv.standard_form(random_a(rng, 0.1)))
        rep = dom.eta0_orbit_representative(f)
        assert abs(dom.eta0_pi(rep) - inv.classify(f).pi) < 1e-6


def test_spray_base_and_invariants():
    p = dom.ConicCoverPoint(2, 1, 0)
    for j in (1, 2, 3):
        assert dom.spray_maps(p, 0, j) == p
    q = dom.spray_maps(dom.ConicCoverPoint(1.5, 2 + 1j, cmath.log(2 + 1.5j)), 0.4 - 0.3j, 1)
    assert q.x * q.y == pytest.approx(1.5 * (2 + 1j)) and q.z == cmath.log(2 + 1.5j)
    t = 0.6 + 0.9j
    s = dom.spray_maps(p, t, 2)
    assert (s.x, s.y, s.z) == pytest.approx((1 + cmath.exp(t), 1, t))
    assert s.residual() < 1e-14


def test_spray_domination_examples():
    assert dom.spray_domination_check(dom.ConicCoverPoint(2, 1, 0))
    assert dom.spray_domination_check(dom.ConicCoverPoint(0, 0.5, 1j * math.pi))
    assert dom.spray_domination_check(dom.ConicCoverPoint(1 - 2j, 0, 1j * math.pi))


def test_cover_point_validate():
    with pytest.raises(ValueError):
        dom.ConicCoverPoint(1, 1, 0).validate()
