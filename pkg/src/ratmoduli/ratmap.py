"""Rational maps as pairs of binary forms, the two-sided action, critical data."""

import re
from dataclasses import dataclass, field

import numpy as np

from .algebra import (DEFAULT_TOL, BinaryForm, SpherePoint, _cluster, as_complex,
                      chordal_distance, projective_distance, roots_on_sphere, sylvester_matrix, wronskian)
from .errors import DegenerateMap, ParseError, ZeroForm
from .moebius import Moebius, from_three_points


class RationalMap:
    """x -> p(x, 1) / q(x, 1) with p, q of common declared degree d."""

    __slots__ = ("p", "q")

    def __init__(self, p, q):
        self.p, self.q = p, q

    @property
    def d(self):
        return self.p.degree

    def vector(self):
        """Homogeneous coordinates (p_d, ..., p_0, q_d, ..., q_0)."""
        return np.concatenate([self.p.coeffs, self.q.coeffs])

    def __call__(self, x):
        x = SpherePoint.of(x)
        return SpherePoint(self.p(x), self.q(x))

    def distance(self, other):
        """Projective distance between coefficient vectors (sine of the angle)."""
        return projective_distance(self.vector(), other.vector())

    def __repr__(self):
        return f"RationalMap({format_map_literal(self)!r})"


def _normalize(vec):
    """Unit max-modulus with the first maximal entry made real positive."""
    a = np.abs(vec)
    k = int(np.argmax(a >= a.max() * (1 - 1e-12)))
    out = vec / vec[k]
    # complex division does not always return exactly 1 for z / z
    out[k] = 1
    return out


def make_map(p, q, tol=DEFAULT_TOL):
    p = p if isinstance(p, BinaryForm) else BinaryForm(p)
    q = q if isinstance(q, BinaryForm) else BinaryForm(q)
    if p.degree != q.degree:
        raise ValueError(f"declared degrees differ: {p.degree} vs {q.degree}")
    vec = np.concatenate([p.coeffs, q.coeffs])
    if not np.any(vec):
        raise ZeroForm("both forms vanish")
    vec = _normalize(vec)
    n = p.degree + 1
    p, q = BinaryForm(vec[:n]), BinaryForm(vec[n:])
    if p.is_zero() or q.is_zero():
        raise DegenerateMap("numerator or denominator vanishes identically")
    # relative gap of the Sylvester matrix: scale-free, unlike |Res| itself
    unit_p = p.scale(1 / np.linalg.norm(p.coeffs))
    unit_q = q.scale(1 / np.linalg.norm(q.coeffs))
    sv = np.linalg.svd(sylvester_matrix(unit_p, unit_q), compute_uv=False)
    if sv.size and sv[-1] <= tol.eq_rel * sv[0]:
        raise DegenerateMap("numerator and denominator share a root")
    return RationalMap(p, q)


@dataclass(frozen=True)
class GroupElement:
    """Pair (g1, g2) acting by f -> g1^-1 o f o g2."""

    g1: Moebius
    g2: Moebius

    def __mul__(self, other):
        # right action: act(g * h, f) == act(h, act(g, f))
        return GroupElement(self.g1 @ other.g1, self.g2 @ other.g2)

    def inverse(self):
        return GroupElement(self.g1.inverse(), self.g2.inverse())

    @classmethod
    def identity(cls):
        return cls(Moebius.identity(), Moebius.identity())

    def distance(self, other):
        return max(self.g1.distance(other.g1), self.g2.distance(other.g2))


def _substitute(form, m):
    """form(a z + b w, c z + d w) for m = [[a, b], [c, d]]."""
    d = form.degree
    lin1 = np.array([m[0, 0], m[0, 1]])
    lin2 = np.array([m[1, 0], m[1, 1]])
    pow1 = [np.array([1.0 + 0j])]
    pow2 = [np.array([1.0 + 0j])]
    for _ in range(d):
        pow1.append(np.convolve(pow1[-1], lin1))
        pow2.append(np.convolve(pow2[-1], lin2))
    out = np.zeros(d + 1, dtype=complex)
    for i, c in enumerate(form.coeffs):
        if c != 0:
            out += c * np.convolve(pow1[d - i], pow2[i])
    return out


def act(g, f, tol=DEFAULT_TOL):
    """f^g = g1^-1 o f o g2."""
    P = _substitute(f.p, g.g2.m)
    Q = _substitute(f.q, g.g2.m)
    a, b, c, d = g.g1.m.ravel()
    # adjugate of g1 is its inverse up to scale
    return make_map(d * P - b * Q, -c * P + a * Q, tol)


@dataclass
class CriticalData:
    points: list
    values: list
    pairing: list
    near_degenerate: bool = False
    warnings: list = field(default_factory=list)


def critical_data(f, tol=DEFAULT_TOL):
    if f.d < 2:
        raise ValueError("critical data needs degree >= 2")
    pts = roots_on_sphere(wronskian(f.p, f.q), tol)
    imgs = [f(p) for p, _ in pts]
    groups = _cluster(imgs, tol.cluster_chordal)
    values, pairing = [], [None] * len(pts)
    for gi, idx in enumerate(groups):
        # representative: image of the highest-multiplicity point in the cluster
        best = max(idx, key=lambda i: pts[i][1])
        values.append((imgs[best], sum(pts[i][1] for i in idx)))
        for i in idx:
            pairing[i] = gi
    near = False
    warnings = []
    sep = 10 * tol.cluster_chordal
    for coll, name in ((pts, "points"), (values, "values")):
        for i in range(len(coll)):
            for j in range(i + 1, len(coll)):
                if chordal_distance(coll[i][0], coll[j][0]) < sep:
                    near = True
                    warnings.append(f"NearBoundary: critical {name} {i} and {j} nearly coincide")
    return CriticalData(pts, values, pairing, near, warnings)


def distinct_value_count(cd):
    return len(cd.values)


def _far_point(avoid):
    cands = [SpherePoint.of(c) for c in (1, -1, 1j, -1j, 2, 0.5 + 0.5j, -2j, 3)]
    return max(cands, key=lambda c: min(chordal_distance(c, a) for a in avoid))


def degree2_frame(f, tol=DEFAULT_TOL):
    """(alpha, beta) with alpha^-1 o f o beta = x^2."""
    if f.d != 2:
        raise ValueError("degree-2 map expected")
    cd = critical_data(f, tol)
    if len(cd.points) != 2:
        raise DegenerateMap("a degree-2 map has two simple critical points")
    (c1, _), (c2, _) = cd.points
    p = _far_point([c1, c2])
    beta = from_three_points(c1, p, c2)
    alpha = from_three_points(f(c1), f(p), f(c2))
    return alpha, beta


def connect_degree2(f1, f2, tol=DEFAULT_TOL):
    """Group element g with act(g, f1) = f2 for degree-2 maps."""
    a1, b1 = degree2_frame(f1, tol)
    a2, b2 = degree2_frame(f2, tol)
    return GroupElement(a1 @ a2.inverse(), b1 @ b2.inverse())


# map literals: "p3,p2,p1,p0 / q3,q2,q1,q0"

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(
    rf"^(?:(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?i)?|(?P<imonly>[+-]?(?:{_NUM})?i))$")


def parse_complex(text, column=1):
    s = "".join(text.split())
    m = _COMPLEX.match(s)
    if not s or m is None:
        raise ParseError(f"bad complex literal {text.strip()!r}", column)
    re_part = float(m.group("re")) if m.group("re") else 0.0
    im_txt = m.group("im") or m.group("imonly")
    im_part = 0.0
    if im_txt:
        body = im_txt[:-1]
        im_part = float(body + "1") if body in ("", "+", "-") else float(body)
    try:
        return as_complex(complex(re_part, im_part))
    except OverflowError:
        raise ParseError(f"non-finite literal {text.strip()!r}", column) from None


def _split(text, sep, offset):
    parts, start = [], 0
    for k, ch in enumerate(text):
        if ch == sep:
            parts.append((text[start:k], offset + start))
            start = k + 1
    parts.append((text[start:], offset + start))
    return parts


def _first_col(chunk, base):
    stripped = len(chunk) - len(chunk.lstrip())
    return base + stripped + 1


def parse_coefficients(text):
    halves = _split(text, "/", 0)
    if len(halves) != 2:
        col = text.find("/", text.find("/") + 1) + 1 if len(halves) > 2 else len(text) + 1
        raise ParseError("expected exactly one '/' separating numerator and denominator", col)
    sides = []
    for chunk, off in halves:
        items = _split(chunk, ",", off)
        sides.append([parse_complex(item, _first_col(item, c)) for item, c in items])
    if len(sides[0]) != len(sides[1]):
        raise ParseError(f"numerator has {len(sides[0])} coefficients, denominator {len(sides[1])}",
                         halves[1][1] + 1)
    if len(sides[0]) < 2:
        raise ParseError("need at least degree 1", 1)
    return sides[0], sides[1]


def parse_map_literal(text, tol=DEFAULT_TOL):
    p, q = parse_coefficients(text)
    return make_map(p, q, tol)


def format_float(x):
    if x == 0:
        return "0"
    if float(x).is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def format_complex(c):
    c = complex(c)
    re_, im = c.real, c.imag
    if im == 0:
        return format_float(re_)
    im_txt = format_float(im) + "i"
    if re_ == 0:
        return im_txt
    return format_float(re_) + ("" if im_txt.startswith("-") else "+") + im_txt


def format_map_literal(f):
    p = ",".join(format_complex(c) for c in f.p.coeffs)
    q = ",".join(format_complex(c) for c in f.q.coeffs)
    return f"{p} / {q}"
