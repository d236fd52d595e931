import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratmoduli.algebra import (INFINITY, BinaryForm, SpherePoint, ToleranceConfig, chordal_distance,
                               matrix_exp_sl2, numerical_rank, projective_distance, resultant,
                               roots_on_sphere, wronskian)
from ratmoduli.errors import EmptyInput, NotTraceless, ZeroForm

import oracles

finite = st.floats(-10, 10, allow_nan=False)
cplx = st.builds(complex, finite, finite)


def _roots(form):
    return [(p.to_complex(), m) for p, m in roots_on_sphere(BinaryForm(form))]


def test_tolerance_config_validates():
    with pytest.raises(ValueError):
        ToleranceConfig(eq_rel=0)
    with pytest.raises(ValueError):
        ToleranceConfig(cluster_chordal=2)


def test_sphere_point_normalization():
    p = SpherePoint(4, 2)
    assert p.z == 1 and p.w == 0.5
    assert SpherePoint.of(math.inf).is_infinity
    assert SpherePoint.of(None) == INFINITY
    with pytest.raises(ValueError):
        SpherePoint(0, 0)
    assert SpherePoint.of(3 + 1j).to_complex() == 3 + 1j


def test_chordal_distance_examples():
    assert chordal_distance(SpherePoint(0, 1), SpherePoint(0, 1)) == 0
    assert chordal_distance(SpherePoint(1, 0), SpherePoint(0, 1)) == pytest.approx(2)
    assert chordal_distance(SpherePoint(1, 1), SpherePoint(0, 1)) == pytest.approx(math.sqrt(2))


@given(cplx, cplx)
def test_chordal_distance_symmetric_and_bounded(a, b):
    d = chordal_distance(a, b)
    assert d == pytest.approx(chordal_distance(b, a))
    assert 0 <= d <= 2 + 1e-12


def test_roots_monomial():
    # z^2 w^2
    r = _roots([0, 0, 1, 0, 0])
    assert r == [(0, 2), (complex(math.inf, 0), 2)]


def test_roots_simple_cubic():
    r = sorted(_roots([1, 0, -1, 0]), key=lambda pm: pm[0].real)
    assert [m for _, m in r] == [1, 1, 1]
    assert np.allclose([z for z, _ in r], [-1, 0, 1])


def test_roots_of_cusp_wronskian():
    f_p, f_q = BinaryForm([1, 1, 0, 0]), BinaryForm([0, 0, 0, 1])
    r = roots_on_sphere(wronskian(f_p, f_q))
    finite_roots = sorted(p.to_complex().real for p, m in r if not p.is_infinity)
    assert np.allclose(finite_roots, [-2 / 3, 0])
    assert [m for p, m in r if p.is_infinity] == [2]


def test_roots_triple_cluster_refined():
    # (z - 0.3 w)^3 (z + 2w)
    # a triple root spreads by ~eps^(1/3), beyond the default cluster radius
    c = np.poly([0.3, 0.3, 0.3, -2])
    r = [(p.to_complex(), m) for p, m in roots_on_sphere(BinaryForm(c), ToleranceConfig(cluster_chordal=1e-4))]
    triple = [z for z, m in r if m == 3]
    assert len(triple) == 1 and abs(triple[0] - 0.3) < 1e-10


def test_roots_against_sympy():
    rng = np.random.default_rng(1)
    for _ in range(20):
        c = rng.normal(size=5) + 1j * rng.normal(size=5)
        ours = sorted((p.to_complex() for p, _ in roots_on_sphere(BinaryForm(c))), key=lambda z: (z.real, z.imag))
        ref = sorted(oracles.critical_points_affine(list(np.polyint(c)), [0] * 5 + [1]),
                     key=lambda z: (z.real, z.imag))
        assert np.allclose(ours, ref, atol=1e-9)


def test_roots_zero_form():
    with pytest.raises(ZeroForm):
        roots_on_sphere(BinaryForm([0, 0, 0]))
    with pytest.raises(EmptyInput):
        BinaryForm([])


def test_resultant_examples():
    assert resultant(BinaryForm([1, 0]), BinaryForm([0, 1])) == pytest.approx(1)
    assert abs(resultant(BinaryForm([1, -1]), BinaryForm([1, -1]))) < 1e-14
    assert abs(resultant(BinaryForm([1, 0, 0, 0]), BinaryForm([0, 1, 0, 0]))) < 1e-14


def test_resultant_against_sympy():
    rng = np.random.default_rng(2)
    for _ in range(10):
        p = rng.integers(-5, 6, size=4).astype(float)
        q = rng.integers(-5, 6, size=4).astype(float)
        p[0] = q[0] = 1
        ours = resultant(BinaryForm(p), BinaryForm(q))
        ref = oracles.resultant_exact(p, q)
        assert abs(ours - ref) <= 1e-9 * max(1, abs(ref))


def test_numerical_rank_examples():
    assert numerical_rank(np.eye(3)) == 3
    assert numerical_rank([[1, 2, 3], [1, 2, 3]]) == 1
    with pytest.raises(EmptyInput):
        numerical_rank([])


def test_numerical_rank_against_exact_elimination():
    from ratmoduli.dominability import EtaPoint, tangent_matrix
    m = tangent_matrix(EtaPoint(0, 0))
    assert numerical_rank(m) == oracles.rank_exact(m)


def test_matrix_exp_examples():
    t = 0.7 - 0.2j
    assert np.allclose(matrix_exp_sl2(t * np.array([[0, 1], [0, 0]])), [[1, t], [0, 1]])
    assert np.allclose(matrix_exp_sl2(np.zeros((2, 2))), np.eye(2))
    assert np.allclose(matrix_exp_sl2(t * np.diag([1, -1])), np.diag([np.exp(t), np.exp(-t)]))
    with pytest.raises(NotTraceless):
        matrix_exp_sl2(np.eye(2))


@settings(max_examples=50)
@given(cplx, cplx, cplx)
def test_matrix_exp_against_series(a, b, c):
    m = np.array([[a, b], [c, -a]]) / 4
    ref = oracles.expm_series(m)
    assert np.allclose(matrix_exp_sl2(m), ref, rtol=1e-10, atol=1e-10 * np.abs(ref).max())


def test_matrix_exp_small_branch_continuous():
    m = np.array([[1e-5, 2e-5], [3e-5, -1e-5]])
    assert np.allclose(matrix_exp_sl2(m), oracles.expm_series(m), atol=1e-15)


def test_projective_distance():
    v = np.array([1, 2j, 3])
    assert projective_distance(v, (2 - 1j) * v) < 1e-15
    assert projective_distance([1, 0], [0, 1]) == pytest.approx(1)
