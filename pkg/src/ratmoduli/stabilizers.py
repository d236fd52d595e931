"""Stabilizers of cubic maps under the two-sided action."""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_TOL, SpherePoint, chordal_distance
from .errors import NearDegenerate, NotGeneric
from .invariants import EXCEPTIONAL_PI, classify
from .moebius import Moebius, from_three_points
from .ratmap import GroupElement, act, critical_data, make_map
from .table24 import LABELS, row_map

FIX_TOL = 1e-7

# x^3 + x^2 and its non-trivial symmetry (4/27 - x, -2/3 - x)
CUSP_MAP = ([1, 1, 0, 0], [0, 0, 0, 1])
CUSP_SYMMETRY = (Moebius([[-1, 4 / 27], [0, 1]]), Moebius([[-1, -2 / 3], [0, 1]]))

WITNESS_C = (2, 1j, 1 + 1j)


@dataclass
class StabilizerReport:
    case_tag: str
    elements: list = field(default_factory=list)
    one_param_witnesses: list = field(default_factory=list)
    max_residual: float = 0.0
    permutations: list = field(default_factory=list)
    exceptional_distance: float = None


def fix_residual(g, f, tol=DEFAULT_TOL):
    return act(g, f, tol).distance(f)


def conjugate_into(alpha, beta, elem):
    """Transport a symmetry of the model map F to f = alpha o F o beta^-1."""
    return GroupElement(alpha @ elem.g1 @ alpha.inverse(), beta @ elem.g2 @ beta.inverse())


def _far_point(avoid):
    cands = [SpherePoint.of(c) for c in (1, -1, 1j, -1j, 2, 0.5 + 0.5j, -2j, 3)]
    return max(cands, key=lambda c: min(chordal_distance(c, a) for a in avoid))


def _paired(cd):
    return [(p, m, cd.values[cd.pairing[i]][0]) for i, (p, m) in enumerate(cd.points)]


def _closed_null(f, cd, tol):
    (c0, _, v0), (c1, _, v1) = _paired(cd)
    p = _far_point([c0, c1])
    beta = from_three_points(c0, p, c1)
    alpha = from_three_points(v0, f(p), v1)
    wits = []
    for c in WITNESS_C:
        wits.append(GroupElement(Moebius([[c ** 3, 0], [0, 1]]), Moebius([[c, 0], [0, 1]])))
        wits.append(GroupElement(Moebius([[0, c ** 3], [1, 0]]), Moebius([[0, c], [1, 0]])))
    wits = [conjugate_into(alpha, beta, w) for w in wits]
    res = max(fix_residual(w, f, tol) for w in wits)
    return StabilizerReport("ClosedNull", [], wits, res)


def _nonclosed_null(f, cd, tol):
    pairs = _paired(cd)
    double = next(x for x in pairs if x[1] == 2)
    simple = [x for x in pairs if x[1] == 1]
    (c1, _, v1), (c2, _, v2) = simple
    beta = from_three_points(c1, double[0], c2)  # 0 -> c1, 1 -> double point, inf -> c2
    alpha = from_three_points(v1, double[2], v2)
    # model frame: 0 -> 0, 1 -> inf, inf -> -2/3 for points; 0, inf, 4/27 for values
    bm = from_three_points(0, SpherePoint(1, 0), -2 / 3)
    am = from_three_points(0, SpherePoint(1, 0), 4 / 27)
    beta, alpha = beta @ bm.inverse(), alpha @ am.inverse()
    sym = GroupElement(*CUSP_SYMMETRY)
    elems = [GroupElement.identity(), conjugate_into(alpha, beta, sym)]
    res = max(fix_residual(g, f, tol) for g in elems)
    return StabilizerReport("NonClosedNull", elems, [], res)


def _open(f, cd, tol):
    if cd.near_degenerate:
        raise NearDegenerate("; ".join(cd.warnings))
    pairs = _paired(cd)
    pts = [p for p, _, _ in pairs]
    vals = [v for _, _, v in pairs]
    # frames sending 0, 1, inf, t to the four critical points / values
    P = from_three_points(*pts[:3])
    V = from_three_points(*vals[:3])
    tp = P.inverse()(pts[3]).to_complex()
    tv = V.inverse()(vals[3]).to_complex()
    elems, perms, res = [], [], 0.0
    for row in symbolic_free_rows():
        targets, rest = row
        beta = P @ row_map(targets, tp) @ P.inverse()
        alpha = V @ row_map(targets, tv) @ V.inverse()
        # the row must preserve both quartets: t goes to the remaining label
        if chordal_distance(beta(pts[3]), pts[LABELS.index(rest)]) > 1e-6:
            continue
        if chordal_distance(alpha(vals[3]), vals[LABELS.index(rest)]) > 1e-6:
            continue
        g = GroupElement(alpha, beta)
        r = fix_residual(g, f, tol)
        if r < FIX_TOL:
            elems.append(g)
            perms.append(tuple(LABELS.index(lab) for lab in targets + (rest,)))
            res = max(res, r)
    dist = abs(classify(f, tol).pi - EXCEPTIONAL_PI)
    tag = "Exceptional" if len(elems) == 12 else "GenericOpen"
    return StabilizerReport(tag, elems, [], res, perms, dist)


def symbolic_free_rows():
    """(targets, remaining label) for the 24 ordered triples of labels."""
    return [(trip, next(lab for lab in LABELS if lab not in trip))
            for trip in itertools.permutations(LABELS, 3)]


def stabilizer_of(f, tol=DEFAULT_TOL):
    cd = critical_data(f, tol)
    n = len(cd.values)
    if n == 2:
        return _closed_null(f, cd, tol)
    if n == 3:
        return _nonclosed_null(f, cd, tol)
    return _open(f, cd, tol)


def is_even(perm):
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return inv % 2 == 0


def group_closed(elems, tol=1e-6):
    for a, b in itertools.product(elems, repeat=2):
        ab = a * b
        if min(ab.distance(c) for c in elems) > tol:
            return False
    return True


def _fixed_points(m):
    _, vecs = np.linalg.eig(m.m)
    return [SpherePoint(vecs[0, k], vecs[1, k]) for k in range(2)]


def _klein_frame(ms):
    """M with M^-1 ms[0] M = -x and M^-1 ms[1] M = 1/x."""
    f0, f1 = _fixed_points(ms[0])
    e = _fixed_points(ms[1])[0]
    return from_three_points(f0, e, f1)


def _nontrivial(rep):
    ident = GroupElement.identity()
    return [g for g in rep.elements if g.distance(ident) > 1e-6]


def conjugate_klein_stabilizers(f1, f2, tol=DEFAULT_TOL):
    """(g, h) with (g, h) Stab(f1) (g, h)^-1 = Stab(f2)."""
    r1, r2 = stabilizer_of(f1, tol), stabilizer_of(f2, tol)
    if r1.case_tag != "GenericOpen" or r2.case_tag != "GenericOpen" \
            or len(r1.elements) != 4 or len(r2.elements) != 4:
        raise NotGeneric("both maps must have Klein four-group stabilizers")
    n1, n2 = _nontrivial(r1), _nontrivial(r2)
    ga = _klein_frame([n2[0].g1, n2[1].g1]) @ _klein_frame([n1[0].g1, n1[1].g1]).inverse()
    gb = _klein_frame([n2[0].g2, n2[1].g2]) @ _klein_frame([n1[0].g2, n1[1].g2]).inverse()
    return GroupElement(ga, gb), r1, r2


def conjugation_residual(c, elems1, elems2):
    """Largest distance from c x c^-1 (x in elems1) to the nearest element of elems2, and back."""
    img = [GroupElement(c.g1 @ x.g1 @ c.g1.inverse(), c.g2 @ x.g2 @ c.g2.inverse()) for x in elems1]
    fwd = max(min(a.distance(b) for b in elems2) for a in img)
    bwd = max(min(a.distance(b) for b in img) for a in elems2)
    return max(fwd, bwd)


def cusp_model():
    return make_map(*CUSP_MAP)
