import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ratmoduli.algebra import SpherePoint, chordal_distance
from ratmoduli.errors import DegenerateMap, ParseError, ZeroForm
from ratmoduli.moebius import Moebius
from ratmoduli.ratmap import (GroupElement, act, connect_degree2, critical_data, distinct_value_count,
                              format_complex, format_map_literal, make_map, parse_complex, parse_map_literal)
from ratmoduli.suites import random_group_element, trial_rng

import oracles

X3 = ([1, 0, 0, 0], [0, 0, 0, 1])
CUSP = ([1, 1, 0, 0], [0, 0, 0, 1])
F1 = ([1, 1, 0, 0], [0, 0, 5, -3])


def _points(cd):
    return sorted(((p.to_complex(), m) for p, m in cd.points), key=lambda pm: (pm[0].real, pm[0].imag))


def test_make_map_examples():
    assert make_map(*X3).d == 3
    assert make_map(*CUSP).d == 3
    with pytest.raises(DegenerateMap):
        # z^2 (z - w) / w^2 (z - w)
        make_map([1, -1, 0, 0], [0, 1, -1, 0])
    with pytest.raises(ZeroForm):
        make_map([0, 0], [0, 0])
    with pytest.raises(ValueError):
        make_map([1, 0], [0, 0, 1])


def test_make_map_scale_invariant_degeneracy():
    # valid maps stay valid under tiny overall or relative scalings
    f = make_map([1e-6, 3e-6, 0, 1e-6], [2, 0, 1, 1])
    assert f.d == 3


def test_act_identity_and_right_action():
    f = make_map(*F1)
    assert act(GroupElement.identity(), f).distance(f) < 1e-15
    rng = trial_rng(0, 0)
    g, h = random_group_element(rng), random_group_element(rng)
    assert act(h, act(g, f)).distance(act(g * h, f)) < 1e-12


def test_act_pointwise_against_composition():
    rng = trial_rng(0, 1)
    g = random_group_element(rng)
    f = make_map(*F1)
    fg = act(g, f)
    for z in (0.3 + 0.4j, -1.2 + 0.1j):
        direct = g.g1.inverse()(f(g.g2(z)))
        assert chordal_distance(fg(z), direct) < 1e-10


def test_act_x3_one_parameter_witnesses():
    f = make_map(*X3)
    for c in (2, 1j, 1 + 1j):
        g = GroupElement(Moebius([[c ** 3, 0], [0, 1]]), Moebius([[c, 0], [0, 1]]))
        assert act(g, f).distance(f) < 1e-12


def test_act_cusp_symmetry():
    f = make_map(*CUSP)
    g = GroupElement(Moebius([[-1, 4 / 27], [0, 1]]), Moebius([[-1, -2 / 3], [0, 1]]))
    assert act(g, f).distance(f) < 1e-12


def test_critical_data_x3():
    cd = critical_data(make_map(*X3))
    assert _points(cd) == [(0, 2), (complex(math.inf, 0), 2)]
    assert sorted(m for _, m in cd.values) == [2, 2]
    assert distinct_value_count(cd) == 2


def test_critical_data_cusp():
    cd = critical_data(make_map(*CUSP))
    pts = _points(cd)
    assert np.allclose([pts[0][0], pts[1][0]], [-2 / 3, 0])
    vals = sorted(v.to_complex().real for v, _ in cd.values if not v.is_infinity)
    assert np.allclose(vals, [0, 4 / 27])
    assert distinct_value_count(cd) == 3


def test_critical_data_f1():
    cd = critical_data(make_map(*F1))
    finite = sorted(p.to_complex().real for p, _ in cd.points if not p.is_infinity)
    assert np.allclose(finite, [-3 / 5, 0, 1])
    assert any(p.is_infinity for p, _ in cd.points)
    assert distinct_value_count(cd) == 4
    # pairing agrees with direct evaluation
    for i, (p, _) in enumerate(cd.points):
        assert chordal_distance(cd.values[cd.pairing[i]][0], make_map(*F1)(p)) < 1e-9


def test_critical_points_against_sympy():
    rng = np.random.default_rng(0)
    for _ in range(10):
        p = rng.normal(size=4) + 1j * rng.normal(size=4)
        q = rng.normal(size=4) + 1j * rng.normal(size=4)
        cd = critical_data(make_map(p, q))
        ours = sorted((pt.to_complex() for pt, _ in cd.points), key=lambda z: (z.real, z.imag))
        ref = sorted(oracles.critical_points_affine(p, q), key=lambda z: (z.real, z.imag))
        assert np.allclose(ours, ref, atol=1e-8)


def test_degree2_transitivity():
    rng = np.random.default_rng(3)
    for _ in range(20):
        f1 = make_map(rng.normal(size=3) + 1j * rng.normal(size=3), rng.normal(size=3) + 1j * rng.normal(size=3))
        f2 = make_map(rng.normal(size=3) + 1j * rng.normal(size=3), rng.normal(size=3) + 1j * rng.normal(size=3))
        g = connect_degree2(f1, f2)
        assert act(g, f1).distance(f2) < 1e-7


def test_parse_complex_forms():
    cases = {"3": 3, "-2.5": -2.5, "1e-3": 1e-3, "2i": 2j, "-i": -1j, "i": 1j, "1+2i": 1 + 2j,
             "1-2i": 1 - 2j, "-0.5-1.5e2i": -0.5 - 150j, " 4 ": 4}
    for text, val in cases.items():
        assert parse_complex(text) == val


@pytest.mark.parametrize("text,column", [("1,1,0,zz / 0,0,0,1", 7), ("1,2 / 3", 6), ("1,0 0,1", 8),
                                         ("1,0 / 0,1 / 2", 11), ("1,,0 / 0,1,1", 3)])
def test_parse_errors_report_column(text, column):
    with pytest.raises(ParseError) as exc:
        parse_map_literal(text)
    assert exc.value.column == column
    assert f"column {column}" in str(exc.value)


def test_parse_f1_literal():
    f = parse_map_literal("1,1,0,0 / 0,0,5,-3")
    assert f.distance(make_map(*F1)) < 1e-15


coef = st.builds(complex, st.floats(-1e3, 1e3, allow_nan=False), st.floats(-1e3, 1e3, allow_nan=False))


@given(st.lists(coef, min_size=8, max_size=8))
def test_literal_round_trip(c):
    try:
        f = make_map(c[:4], c[4:])
    except (DegenerateMap, ZeroForm):
        return
    g = parse_map_literal(format_map_literal(f))
    assert f.distance(g) < 1e-15


def test_format_complex():
    assert format_complex(3) == "3"
    assert format_complex(-2j) == "-2i"
    assert format_complex(1.5 - 0.25j) == "1.5-0.25i"
    assert parse_complex(format_complex(0.1 + 1e-20j)) == 0.1 + 1e-20j


def test_map_evaluation_matches_affine():
    f = make_map(*F1)
    z = 0.2 - 0.7j
    assert f(z).to_complex() == pytest.approx(oracles.map_value(F1[0], F1[1], z))
    assert f(SpherePoint.of(math.inf)).is_infinity
