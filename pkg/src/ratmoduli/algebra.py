"""Numerical substrate: projective points, binary forms, roots, resultants, rank."""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, NotTraceless, ZeroForm


@dataclass(frozen=True)
class ToleranceConfig:
    eq_rel: float = 1e-9
    cluster_chordal: float = 1e-6
    rank_rel: float = 1e-10

    def __post_init__(self):
        for name in ("eq_rel", "cluster_chordal", "rank_rel"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive, got {v}")
        if self.cluster_chordal >= 1:
            raise ValueError("cluster_chordal must be < 1")


DEFAULT_TOL = ToleranceConfig()


def as_complex(x):
    """Coerce to a finite Python complex."""
    c = complex(x)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise OverflowError(f"non-finite value {c}")
    return c


class SpherePoint:
    """Point (z : w) of the projective line, stored with max(|z|,|w|) = 1."""

    __slots__ = ("z", "w")

    def __init__(self, z, w=1.0):
        z, w = complex(z), complex(w)
        if not all(map(math.isfinite, (z.real, z.imag, w.real, w.imag))):
            raise OverflowError("non-finite homogeneous coordinates")
        s = max(abs(z), abs(w))
        if s == 0:
            raise ValueError("(0 : 0) is not a point")
        # divide by the larger component so it becomes exactly 1
        if abs(z) >= abs(w):
            z, w = 1.0 + 0j, w / z
        else:
            z, w = z / w, 1.0 + 0j
        self.z, self.w = z, w

    @classmethod
    def of(cls, x):
        """Build from a complex number, or from math.inf / None for infinity."""
        if isinstance(x, SpherePoint):
            return x
        if x is None:
            return cls(1, 0)
        c = complex(x)
        if math.isinf(c.real) or math.isinf(c.imag):
            return cls(1, 0)
        return cls(c, 1)

    @property
    def is_infinity(self):
        return self.w == 0

    def to_complex(self):
        """Affine value, or complex infinity."""
        if self.w == 0:
            return complex(math.inf, 0)
        return self.z / self.w

    def vector(self):
        return np.array([self.z, self.w], dtype=complex)

    def __repr__(self):
        if self.is_infinity:
            return "SpherePoint(inf)"
        return f"SpherePoint({self.to_complex():.6g})"

    def __eq__(self, other):
        return isinstance(other, SpherePoint) and self.z == other.z and self.w == other.w

    def __hash__(self):
        return hash((self.z, self.w))


INFINITY = SpherePoint(1, 0)


def chordal_distance(p, q):
    p, q = SpherePoint.of(p), SpherePoint.of(q)
    num = abs(p.z * q.w - q.z * p.w)
    den = math.hypot(abs(p.z), abs(p.w)) * math.hypot(abs(q.z), abs(q.w))
    return 2.0 * num / den


class BinaryForm:
    """Homogeneous polynomial sum c_i z^(d-i) w^i, coefficients descending in z."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).reshape(-1)
        if c.size == 0:
            raise EmptyInput("a binary form needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise OverflowError("non-finite coefficient")
        c.setflags(write=False)
        self.coeffs = c

    @property
    def degree(self):
        return self.coeffs.size - 1

    def __call__(self, p):
        p = SpherePoint.of(p)
        d = self.degree
        zs = p.z ** np.arange(d, -1, -1)
        ws = p.w ** np.arange(0, d + 1)
        return complex(np.sum(self.coeffs * zs * ws))

    def dz(self):
        d = self.degree
        if d == 0:
            return BinaryForm([0])
        return BinaryForm(self.coeffs[:-1] * np.arange(d, 0, -1))

    def dw(self):
        d = self.degree
        if d == 0:
            return BinaryForm([0])
        return BinaryForm(self.coeffs[1:] * np.arange(1, d + 1))

    def __mul__(self, other):
        return BinaryForm(np.convolve(self.coeffs, other.coeffs))

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("degrees differ")
        return BinaryForm(self.coeffs + other.coeffs)

    def __sub__(self, other):
        if self.degree != other.degree:
            raise ValueError("degrees differ")
        return BinaryForm(self.coeffs - other.coeffs)

    def scale(self, c):
        return BinaryForm(self.coeffs * c)

    def is_zero(self):
        return not np.any(self.coeffs)

    def __repr__(self):
        return f"BinaryForm({self.coeffs.tolist()})"


def projective_distance(u, v):
    """Sine of the angle between two complex vectors, computed stably."""
    u = np.asarray(u, dtype=complex).ravel()
    v = np.asarray(v, dtype=complex).ravel()
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0 or u.size != v.size:
        return 1.0
    u, v = u / nu, v / nv
    return float(min(1.0, np.linalg.norm(u - np.vdot(v, u) * v)))


def wronskian(p, q):
    """p_z q_w - p_w q_z; its zeros are the critical points of p/q."""
    return p.dz() * q.dw() - p.dw() * q.dz()


def _polish(coeffs, x, steps=3):
    """A few guarded Newton steps on a dense polynomial."""
    dc = np.polyder(coeffs)
    fx = np.polyval(coeffs, x)
    for _ in range(steps):
        d = np.polyval(dc, x)
        if d == 0:
            break
        x_new = x - fx / d
        f_new = np.polyval(coeffs, x_new)
        if abs(f_new) >= abs(fx):
            break
        x, fx = x_new, f_new
    return x


def _refine_cluster(coeffs, x, m):
    """Newton on the (m-1)-th derivative, where an m-fold root is simple."""
    c = np.array(coeffs)
    for _ in range(m - 1):
        c = np.polyder(c)
    if c.size < 2:
        return x
    return _polish(c, x, steps=4)


def _cluster(points, radius):
    """Single-linkage clusters of SpherePoints; returns lists of indices."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if chordal_distance(points[i], points[j]) < radius:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def roots_on_sphere(f, tol=DEFAULT_TOL):
    """All roots of a binary form on P^1 as (SpherePoint, multiplicity) pairs."""
    if not isinstance(f, BinaryForm):
        f = BinaryForm(f)
    c = f.coeffs
    scale = np.max(np.abs(c))
    if scale == 0:
        raise ZeroForm("form vanishes identically")
    c = c / scale
    d = f.degree
    k = 0
    while k < d and abs(c[k]) <= tol.eq_rel:
        k += 1
    poly = c[k:]
    rev = poly[::-1]
    raw = []
    for r in np.roots(poly) if poly.size > 1 else []:
        # polish in whichever chart keeps the root inside the unit disc
        if abs(r) <= 1:
            raw.append(("z", _polish(poly, r)))
        else:
            raw.append(("w", _polish(rev, 1 / r)))
    pts = [SpherePoint(x, 1) if ch == "z" else SpherePoint(1, x) for ch, x in raw]
    pts += [INFINITY] * k
    out = []
    for idx in _cluster(pts, tol.cluster_chordal):
        m = len(idx)
        if any(i >= len(raw) for i in idx):
            out.append((INFINITY, m))
            continue
        vals = [pts[i] for i in idx]
        if all(v.w == 1 for v in vals):
            x = complex(np.mean([v.z for v in vals]))
            if m > 1:
                x = _refine_cluster(poly, x, m)
            out.append((SpherePoint(x, 1), m))
        else:
            x = complex(np.mean([v.w / v.z for v in vals]))
            if m > 1:
                x = _refine_cluster(rev, x, m)
            out.append((SpherePoint(1, x), m))
    out.sort(key=lambda pm: (pm[0].is_infinity, abs(pm[0].to_complex()) if not pm[0].is_infinity else 0))
    return out


def sylvester_matrix(p, q):
    p = p.coeffs if isinstance(p, BinaryForm) else np.asarray(p, dtype=complex)
    q = q.coeffs if isinstance(q, BinaryForm) else np.asarray(q, dtype=complex)
    m, n = p.size - 1, q.size - 1
    s = np.zeros((m + n, m + n), dtype=complex)
    for i in range(n):
        s[i, i:i + m + 1] = p
    for i in range(m):
        s[n + i, i:i + n + 1] = q
    return s


def resultant(p, q):
    s = sylvester_matrix(p, q)
    if s.size == 0:
        return 1 + 0j
    return complex(np.linalg.det(s))


def numerical_rank(rows, tol=DEFAULT_TOL):
    a = np.array(rows, dtype=complex)
    if a.size == 0:
        raise EmptyInput("no rows")
    if a.ndim != 2:
        raise ValueError("rows must have equal length")
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol.rank_rel * s[0]))


def matrix_exp_sl2(m, tol=DEFAULT_TOL):
    """exp of a traceless 2x2 matrix: cosh(d) I + sinh(d)/d m with d^2 = -det m."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    size = max(1.0, float(np.max(np.abs(m))))
    if abs(m[0, 0] + m[1, 1]) > tol.eq_rel * size:
        raise NotTraceless(f"trace {m[0, 0] + m[1, 1]}")
    d2 = -(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    d = cmath.sqrt(d2)
    if abs(d) < 1e-4:
        ch = 1 + d2 / 2 + d2 * d2 / 24
        sh = 1 + d2 / 6 + d2 * d2 / 120
    else:
        ch = cmath.cosh(d)
        sh = cmath.sinh(d) / d
    return ch * np.eye(2, dtype=complex) + sh * m
