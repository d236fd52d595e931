import cmath
import math

import numpy as np
import pytest

from ratmoduli.algebra import INFINITY, SpherePoint, chordal_distance
from ratmoduli.errors import DegenerateQuadruple, DegenerateTriple, ForbiddenValue
from ratmoduli.moebius import (Moebius, SingularMatrix, apply, balancing_transform, cross_ratio,
                               from_three_points, six_cross_ratios)

import oracles

INF = math.inf


def _random_points(rng, n, radius=3):
    return list(radius * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)))


def _random_moebius(rng):
    while True:
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if abs(np.linalg.det(m)) > 0.1:
            return Moebius(m)


def test_singular_matrix_rejected():
    with pytest.raises(SingularMatrix):
        Moebius([[1, 2], [2, 4]])


def test_apply_examples():
    assert apply(Moebius.identity(), SpherePoint(5, 1)) == SpherePoint(5, 1)
    assert Moebius([[0, 1], [1, 0]])(INFINITY) == SpherePoint(0, 1)
    assert Moebius([[1, 3], [0, 1]])(INFINITY).is_infinity


def test_composition_and_inverse():
    rng = np.random.default_rng(0)
    g, h = _random_moebius(rng), _random_moebius(rng)
    z = 0.3 + 0.2j
    assert chordal_distance((g @ h)(z), g(h(z))) < 1e-12
    assert (g @ g.inverse()).equals(Moebius.identity())


def test_from_three_points_examples():
    assert from_three_points(0, 1, INF).equals(Moebius.identity())
    assert from_three_points(INF, 1, 0).equals(Moebius([[0, 1], [1, 0]]))
    assert from_three_points(1, INF, 0).equals(Moebius([[0, 1], [-1, 1]]))
    with pytest.raises(DegenerateTriple):
        from_three_points(1, 1, 2)


def test_from_three_points_round_trip():
    rng = np.random.default_rng(1)
    for _ in range(200):
        z = _random_points(rng, 3)
        g = from_three_points(*z)
        for src, dst in zip((0, 1, INF), z):
            assert chordal_distance(g(src), dst) < 1e-9


def test_cross_ratio_examples():
    lam = 0.4 + 1.3j
    assert cross_ratio([0, INF, 1, lam]) == pytest.approx(lam)
    assert cross_ratio([0, INF, 1, -1]) == pytest.approx(-1)


def test_cross_ratio_swap_first_two_inverts():
    # swapping the first pair inverts the value; no ordering convention gives 1 - v here
    v = cross_ratio([0, 1, INF, 2])
    assert cross_ratio([1, 0, INF, 2]) == pytest.approx(1 / v)


def test_cross_ratio_against_affine_formula():
    rng = np.random.default_rng(2)
    for _ in range(200):
        z = _random_points(rng, 4)
        assert cross_ratio(z) == pytest.approx(oracles.cross_ratio_affine(*z), rel=1e-9)


def test_cross_ratio_moebius_invariance():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        q = _random_points(rng, 4)
        g = _random_moebius(rng)
        before = cross_ratio(q)
        after = cross_ratio([g(z) for z in q])
        assert abs(after - before) <= 1e-8 * (1 + abs(before))


def test_cross_ratio_degenerate():
    with pytest.raises(DegenerateQuadruple):
        cross_ratio([0, 1, 1, 2])


def test_six_cross_ratios_examples():
    assert sorted(np.round(six_cross_ratios(2), 12).real) == [-1, -1, 0.5, 0.5, 2, 2]
    w = cmath.exp(1j * math.pi / 3)
    vals = six_cross_ratios(w)
    distinct = {complex(round(v.real, 9), round(v.imag, 9)) for v in vals}
    assert len(distinct) == 2
    assert np.allclose(sorted(np.real(six_cross_ratios(3))), sorted([3, 1 / 3, -2, -0.5, 1.5, 2 / 3]))
    with pytest.raises(ForbiddenValue):
        six_cross_ratios(1)


def test_six_cross_ratios_closure():
    rng = np.random.default_rng(4)
    for _ in range(100):
        lam = complex(*rng.normal(size=2))
        vals = six_cross_ratios(lam)
        for v in vals:
            for w in (1 / v, 1 - v):
                assert min(abs(w - u) for u in vals) <= 1e-9 * (1 + abs(w))


def _balance_residual(alpha, q):
    z = [alpha(p).to_complex() for p in q]
    return max(abs(z[0] + z[1]), abs(z[2] + z[3])), z


def test_balancing_examples():
    q = [2, -2, 1, -1]
    alpha = balancing_transform(q)
    assert _balance_residual(alpha, q)[0] < 1e-12
    q = [0.5, -0.5, 1, -1]
    assert _balance_residual(balancing_transform(q), q)[0] < 1e-9


def test_balancing_random_quadruples():
    rng = np.random.default_rng(5)
    for _ in range(300):
        q = _random_points(rng, 4)
        res, z = _balance_residual(balancing_transform(q), q)
        assert res < 1e-8
        assert all(np.isfinite(z))


def test_balancing_with_infinity():
    q = [INF, 0, 1, 2 + 1j]
    res, _ = _balance_residual(balancing_transform(q), q)
    assert res < 1e-8
