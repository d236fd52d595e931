"""Moebius transformations, cross-ratios and balanced quadruples."""

import numpy as np

from .algebra import (DEFAULT_TOL, INFINITY, SpherePoint, as_complex, chordal_distance,
                      projective_distance)
from .errors import DegenerateQuadruple, DegenerateTriple, ForbiddenValue, RatModuliError


class SingularMatrix(RatModuliError):
    pass


class Moebius:
    """x -> (a x + b) / (c x + d), stored as the matrix [[a, b], [c, d]]."""

    __slots__ = ("m",)

    def __init__(self, m, tol=DEFAULT_TOL):
        m = np.array(m, dtype=complex).reshape(2, 2)
        if not np.all(np.isfinite(m)):
            raise OverflowError("non-finite matrix entry")
        size = np.max(np.abs(m))
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if size == 0 or abs(det) <= tol.eq_rel * size * size:
            raise SingularMatrix(f"determinant {det} too small")
        m.setflags(write=False)
        self.m = m

    @classmethod
    def from_coeffs(cls, a, b, c, d):
        return cls([[a, b], [c, d]])

    @classmethod
    def identity(cls):
        return cls(np.eye(2))

    def __call__(self, p):
        p = SpherePoint.of(p)
        v = self.m @ p.vector()
        return SpherePoint(v[0], v[1])

    def __matmul__(self, other):
        """Composition: (self @ other)(x) = self(other(x))."""
        return Moebius(self.m @ other.m)

    def inverse(self):
        a, b, c, d = self.m.ravel()
        return Moebius([[d, -b], [-c, a]])

    def det(self):
        return complex(self.m[0, 0] * self.m[1, 1] - self.m[0, 1] * self.m[1, 0])

    def normalized(self):
        """Unit Frobenius norm, largest entry made real positive."""
        m = self.m / np.linalg.norm(self.m)
        k = np.argmax(np.abs(m).ravel() + 1e-12 * np.arange(4)[::-1])
        ph = m.ravel()[k]
        return m * (abs(ph) / ph)

    def distance(self, other):
        """Projective distance: sine of the angle between the two matrices."""
        return projective_distance(self.m, other.m)

    def equals(self, other, tol=1e-9):
        return self.distance(other) <= tol

    def __repr__(self):
        return f"Moebius({np.round(self.normalized(), 12).tolist()})"


def apply(g, p):
    return g(p)


def from_three_points(z1, z2, z3, tol=DEFAULT_TOL):
    """The unique g with g(0)=z1, g(1)=z2, g(inf)=z3."""
    z1, z2, z3 = (SpherePoint.of(z) for z in (z1, z2, z3))
    for p, q in ((z1, z2), (z1, z3), (z2, z3)):
        if chordal_distance(p, q) <= tol.eq_rel:
            raise DegenerateTriple("points are not pairwise distinct")
    a1, a3 = z1.vector(), z3.vector()
    # z2 = k3 * z3 + k1 * z1 fixes the scales of the two columns
    k3, k1 = np.linalg.solve(np.column_stack([a3, a1]), z2.vector())
    return Moebius(np.column_stack([k3 * a3, k1 * a1]))


def _dets(pts):
    v = [p.vector() for p in pts]
    return lambda i, j: v[i][0] * v[j][1] - v[j][0] * v[i][1]


def cross_ratio(q, tol=DEFAULT_TOL):
    """(z1, z2; z3, z4) normalized so that (0, inf; 1, t) = t."""
    pts = [SpherePoint.of(p) for p in q]
    if len(pts) != 4:
        raise ValueError("need four points")
    for i in range(4):
        for j in range(i + 1, 4):
            if chordal_distance(pts[i], pts[j]) <= tol.eq_rel:
                raise DegenerateQuadruple("points are not pairwise distinct")
    d = _dets(pts)
    return complex(d(0, 3) * d(1, 2) / (d(0, 2) * d(1, 3)))


def _check_lambda(lam, tol):
    lam = as_complex(lam)
    if abs(lam) <= tol.eq_rel or abs(lam - 1) <= tol.eq_rel:
        raise ForbiddenValue(f"cross-ratio {lam} is degenerate")
    return lam


def six_cross_ratios(lam, tol=DEFAULT_TOL):
    lam = _check_lambda(lam, tol)
    return [lam, 1 / lam, 1 - lam, 1 / (1 - lam), lam / (lam - 1), (lam - 1) / lam]


_POLE_CANDIDATES = [INFINITY] + [SpherePoint.of(c) for c in
                                 (0, 1, -1, 1j, -1j, 2, -2, 2j, -2j, 0.5, -0.5, 0.5j, -0.5j)]


def balancing_transform(q, tol=DEFAULT_TOL):
    """Moebius alpha with alpha(z1) + alpha(z2) = alpha(z3) + alpha(z4) = 0, all finite."""
    pts = [SpherePoint.of(p) for p in q]
    if len(pts) != 4:
        raise ValueError("need four points")
    for i in range(4):
        for j in range(i + 1, 4):
            if chordal_distance(pts[i], pts[j]) <= tol.eq_rel:
                raise DegenerateQuadruple("points are not pairwise distinct")
    if all(not p.is_infinity for p in pts):
        pole = INFINITY
    else:
        pole = max(_POLE_CANDIDATES, key=lambda c: min(chordal_distance(c, p) for p in pts))
    # h: z3 -> 1, z4 -> -1, pole -> inf
    k = from_three_points(pts[2], pts[3], pole)
    h = Moebius([[-2, 1], [0, 1]]) @ k.inverse()
    z1, z2 = (h(p).to_complex() for p in pts[:2])
    s, prod = z1 + z2, z1 * z2
    if abs(s) <= tol.eq_rel * (1 + abs(z1) + abs(z2)):
        alpha = h
    else:
        roots = np.roots([s, 2 * (1 + prod), s])
        ok = [r for r in roots if abs(r - 1) > 1e-8 and abs(r + 1) > 1e-8]
        if not ok:
            raise DegenerateQuadruple("no admissible balancing parameter")
        A = min(ok, key=abs)
        alpha = Moebius([[1, A], [A, 1]]) @ h
    imgs = [alpha(p) for p in pts]
    if any(p.is_infinity or abs(p.to_complex()) > 1 / tol.eq_rel for p in imgs):
        raise DegenerateQuadruple("balanced images are not finite")
    return alpha


def table24(t):
    """The 24 Moebius maps sending 0, 1, inf into {0, 1, inf, t}; see ratmoduli.table24."""
    from .table24 import table24 as _t24
    return _t24(t)
