"""Symmetrized cross-ratios, the standard form f_a, signatures and the quotient map pi."""

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_TOL, INFINITY, SpherePoint, as_complex, chordal_distance
from .errors import ForbiddenValue, IllConditioned, NearDegenerate, NotOpenStratum
from .moebius import _check_lambda, cross_ratio, six_cross_ratios
from .ratmap import critical_data, make_map

FORBIDDEN_A = (0.0, -1.0, -1.5, -2.0, -3.0)

# pi on the orbit with stabilizer of order 12
EXCEPTIONAL_PI = 27 / 4
EXCEPTIONAL_A = -complex(math.cos(math.pi / 3), math.sin(math.pi / 3)) - 1

STRATA = ("TwoValues", "ThreeValues", "OpenStratum")


@dataclass(frozen=True)
class Signature:
    mu: complex
    lam: complex


@dataclass
class OrbitClass:
    stratum: str
    pi: complex
    exceptional: bool
    exceptional_distance: float = math.inf
    signature: Signature = None
    a: complex = None
    warnings: list = field(default_factory=list)


def elementary_symmetric(values):
    """[sigma_1, ..., sigma_n] of the given numbers."""
    c = np.poly(np.asarray(values, dtype=complex))
    return [complex((-1) ** k * c[k]) for k in range(1, len(c))]


def s2(lam, tol=DEFAULT_TOL):
    return elementary_symmetric(six_cross_ratios(lam, tol))[1]


def s_closed_form(lam, tol=DEFAULT_TOL):
    lam = _check_lambda(lam, tol)
    return -((lam + 1) * (2 * lam - 1) * (lam - 2)) ** 2 / (4 * lam ** 2 * (lam - 1) ** 2)


def symmetrized_cross_ratio(lam, tol=DEFAULT_TOL):
    """s(lam), invariant under all reorderings of the quartet."""
    return s_closed_form(lam, tol)


def rel_residual(x, y):
    return abs(x - y) / max(1.0, abs(x), abs(y))


def sk_identities_check(lam, tol=DEFAULT_TOL):
    """sigma_k of the six cross-ratios and the residuals of the five identities."""
    s = elementary_symmetric(six_cross_ratios(lam, tol))
    res = {
        "s1=3": rel_residual(s[0], 3),
        "s5=3": rel_residual(s[4], 3),
        "s6=1": rel_residual(s[5], 1),
        "s4=s2": rel_residual(s[3], s[1]),
        "s3=2s2-5": rel_residual(s[2], 2 * s[1] - 5),
    }
    return {"sigma": s, "residuals": res, "max_residual": max(res.values())}


def product_identity_residual(lam, mu, tol=DEFAULT_TOL):
    """mu^2 (mu-1)^2 (s2(lam) - s2(mu)) against prod (mu - r) over the six ratios of lam."""
    mu = _check_lambda(mu, tol)
    lhs = mu ** 2 * (mu - 1) ** 2 * (s2(lam, tol) - s2(mu, tol))
    rhs = complex(np.prod([mu - r for r in six_cross_ratios(lam, tol)]))
    return rel_residual(lhs, rhs)


def check_a(a, tol=DEFAULT_TOL):
    a = as_complex(a)
    for c in FORBIDDEN_A:
        if abs(a - c) <= tol.eq_rel * (1 + abs(c)):
            raise ForbiddenValue(f"a = {a} is a forbidden parameter")
    return a


def standard_form(a, tol=DEFAULT_TOL):
    """f_a = x^2 (x + a) / ((2a + 3) x - (a + 2))."""
    a = check_a(a, tol)
    return make_map([1, a, 0, 0], [0, 0, 2 * a + 3, -(a + 2)], tol)


def mu_lambda_from_a(a, tol=DEFAULT_TOL):
    a = check_a(a, tol)
    mu = -a * (a + 2) / (2 * a + 3)
    return Signature(mu, mu ** 3 / (a + 2) ** 2)


def a_from_mu_lambda(sig, tol=DEFAULT_TOL):
    mu, lam = _check_lambda(sig.mu, tol), _check_lambda(sig.lam, tol)
    num = mu ** 3 + 3 * mu * lam - 4 * lam
    den = 2 * lam * (1 - mu)
    if abs(den) < tol.eq_rel * abs(num):
        raise IllConditioned("signature too close to the degenerate locus")
    return num / den


def six_a_values(a, tol=DEFAULT_TOL):
    a = check_a(a, tol)
    return [a, -(2 * a + 3) / (a + 2), -(a + 3), -a / (a + 1),
            -(2 * a + 3) / (a + 1), -(a + 3) / (a + 2)]


def pi_of_a(a, tol=DEFAULT_TOL):
    """pi(f_a) = -a^2 (2a+3)^2 (a+3)^2 / (4 (a+1)^2 (a+2)^2)."""
    a = check_a(a, tol)
    return -(a * (2 * a + 3) * (a + 3)) ** 2 / (4 * ((a + 1) * (a + 2)) ** 2)


def pi_symmetrized(a, tol=DEFAULT_TOL):
    """sigma_2 of the six a-values, shifted so the null fibre maps to 0."""
    return elementary_symmetric(six_a_values(a, tol))[1] - 117 / 4


def pi_difference_identity_check(a1, a2, tol=DEFAULT_TOL):
    a1, a2 = check_a(a1, tol), check_a(a2, tol)
    lhs = pi_of_a(a2, tol) - pi_of_a(a1, tol)
    num = ((a1 - a2) * (a1 + a2 + 3) * (a1 * a2 + a1 + a2) * (a1 * a2 + a1 + 2 * a2 + 3)
           * (a1 * a2 + 2 * a1 + a2 + 3) * (a1 * a2 + 2 * a1 + 2 * a2 + 3))
    rhs = num / ((a1 + 1) ** 2 * (a1 + 2) ** 2 * (a2 + 1) ** 2 * (a2 + 2) ** 2)
    return {"lhs": lhs, "rhs": rhs, "residual": rel_residual(lhs, rhs)}


# p(mu, lam) as (coefficient, power of lam, power of mu)
P_TERMS = (
    (-1, 2, 12), (1, 1, 12), (6, 2, 11), (-4, 1, 11), (-45, 2, 10), (54, 3, 9),
    (160, 4, 8), (-1, 0, 11), (34, 1, 10), (89, 2, 9), (-563, 3, 8), (-640, 4, 7),
    (1, 0, 10), (-98, 1, 9), (173, 2, 8), (1676, 3, 7), (1044, 4, 6), (-44, 5, 5),
    (110, 1, 8), (-782, 2, 7), (-2340, 3, 6), (-782, 4, 5), (110, 5, 4), (-44, 1, 7),
    (1044, 2, 6), (1676, 3, 5), (173, 4, 4), (-98, 5, 3), (1, 6, 2), (-640, 2, 5),
    (-563, 3, 4), (89, 4, 3), (34, 5, 2), (-1, 6, 1), (160, 2, 4), (54, 3, 3),
    (-45, 4, 2), (-4, 5, 1), (6, 4, 1), (1, 5, 0), (-1, 4, 0),
)


def _cx(z):
    return (Fraction(z.real), Fraction(z.imag))


def _cmul(u, v):
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _cpowers(z, n):
    out = [(Fraction(1), Fraction(0))]
    for _ in range(n):
        out.append(_cmul(out[-1], z))
    return out


def pi_from_mu_lambda_direct(sig, tol=DEFAULT_TOL):
    """p(mu, lam) / (4 lam^2 (lam-1)^2 mu^4 (mu-1)^4), evaluated exactly at the given doubles.

    Near a = -3 the numerator and denominator are both tiny and the float
    sum cancels catastrophically, so the arithmetic is done in rationals.
    """
    mu, lam = _check_lambda(sig.mu, tol), _check_lambda(sig.lam, tol)
    m, l_ = _cx(mu), _cx(lam)
    mp, lp = _cpowers(m, 12), _cpowers(l_, 6)
    num_re = num_im = Fraction(0)
    for c, i, j in P_TERMS:
        t = _cmul(lp[i], mp[j])
        num_re += c * t[0]
        num_im += c * t[1]
    one = Fraction(1)
    lm1, mm1 = (l_[0] - one, l_[1]), (m[0] - one, m[1])
    den = _cmul(_cmul(lp[2], _cmul(lm1, lm1)), _cmul(mp[4], _cpowers(mm1, 4)[4]))
    den = (4 * den[0], 4 * den[1])
    norm = den[0] * den[0] + den[1] * den[1]
    re = (num_re * den[0] + num_im * den[1]) / norm
    im = (num_im * den[0] - num_re * den[1]) / norm
    return complex(float(re), float(im))


_SPECIAL = (SpherePoint.of(0), SpherePoint.of(1), INFINITY)


def _mu_margin(mu):
    return min(chordal_distance(SpherePoint.of(mu), s) for s in _SPECIAL)


def signature_orderings(f, tol=DEFAULT_TOL):
    """All 24 (mu, lambda) pairs from simultaneous orderings of critical points and values."""
    cd = critical_data(f, tol)
    if len(cd.values) != 4 or len(cd.points) != 4:
        raise NotOpenStratum(f"{len(cd.values)} distinct critical values")
    if cd.near_degenerate:
        raise NearDegenerate("; ".join(cd.warnings))
    pairs = [(p, cd.values[cd.pairing[i]][0]) for i, (p, _) in enumerate(cd.points)]
    out = []
    for perm in itertools.permutations(range(4)):
        pts = [pairs[k][0] for k in perm]
        vals = [pairs[k][1] for k in perm]
        out.append(Signature(cross_ratio(pts, tol), cross_ratio(vals, tol)))
    return out


def signature_of(f, tol=DEFAULT_TOL):
    return max(signature_orderings(f, tol), key=lambda s: _mu_margin(s.mu))


def classify(f, tol=DEFAULT_TOL, exceptional_tol=1e-6):
    if f.d != 3:
        raise ValueError("classification is defined for cubic maps")
    cd = critical_data(f, tol)
    n = len(cd.values)
    if n < 4:
        stratum = "TwoValues" if n <= 2 else "ThreeValues"
        return OrbitClass(stratum, 0j, False, abs(EXCEPTIONAL_PI), warnings=list(cd.warnings))
    sig = signature_of(f, tol)
    a = a_from_mu_lambda(sig, tol)
    pi = pi_of_a(a, tol)
    warnings = list(cd.warnings)
    direct = pi_from_mu_lambda_direct(sig, tol)
    if abs(direct - pi) > 1e-6 * max(1.0, abs(pi)):
        warnings.append(f"CrossCheck: direct pi {direct} differs from {pi}")
    dist = abs(pi - EXCEPTIONAL_PI)
    return OrbitClass("OpenStratum", pi, dist < exceptional_tol, dist, sig, a, warnings)


def same_orbit(f, g, tol=DEFAULT_TOL, pi_tol=1e-6):
    cf, cg = classify(f, tol), classify(g, tol)
    if cf.stratum != cg.stratum:
        return False
    if cf.stratum != "OpenStratum":
        return True
    return abs(cf.pi - cg.pi) <= pi_tol * (1 + abs(cf.pi))


def a_for_pi(c, tol=DEFAULT_TOL):
    """All admissible a with pi(a) = c."""
    c = as_complex(c)
    # a^2 (2a+3)^2 (a+3)^2 + 4c (a+1)^2 (a+2)^2 = 0
    lhs = np.polymul(np.polymul([1, 0, 0], [4, 12, 9]), [1, 6, 9])
    rhs = 4 * c * np.polymul([1, 2, 1], [1, 4, 4])
    out = []
    for r in np.roots(np.polyadd(lhs, rhs)):
        # forbidden values are double roots when c = 0, so they only resolve to ~sqrt(eps)
        if any(abs(r - f) <= 1e-6 * (1 + abs(f)) for f in FORBIDDEN_A):
            continue
        out.append(complex(r))
    return out


LIMIT_MAPS = {
    0.0: ([1, 0, 0, 0], [0, 0, 3, -2]),
    -1.5: ([1, -1.5, 0, 0], [0, 0, 0, -0.5]),
    -3.0: ([1, -3, 0, 0], [0, 0, -3, 1]),
}


def null_fibre_continuity_probe(n, direction=complex(0.6, 0.8), tol=DEFAULT_TOL):
    """pi(f_a) and f_a along a = a0 + 10^-k * direction, for the three null-fibre limits."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rows = []
    ok = True
    for a0, (p, q) in LIMIT_MAPS.items():
        limit = make_map(p, q, tol)
        prev = math.inf
        for k in range(1, n + 1):
            eps = 10.0 ** (-k)
            a = a0 + eps * direction
            pi = pi_of_a(a, tol)
            dist = standard_form(a, tol).distance(limit)
            ratio = abs(pi) / eps ** 2
            good = abs(pi) < prev and dist < 10 * eps
            ok &= good
            prev = abs(pi)
            rows.append({"a0": a0, "a": a, "pi": pi, "pi_over_eps2": ratio,
                         "map_distance": dist, "ok": good})
    return {"ok": ok, "rows": rows}
