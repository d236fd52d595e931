"""The family eta0, tangent rank checks, omega/chi, orbit representatives and sprays."""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_TOL, ToleranceConfig, as_complex, matrix_exp_sl2, numerical_rank
from .errors import ChartSingular, OnResultantLocus, SolveFailed
from .invariants import a_from_mu_lambda, classify, pi_of_a, Signature
from .moebius import Moebius
from .ratmap import GroupElement, act, make_map

GEN_A = np.array([[1, 0], [0, -1]], dtype=complex)
GEN_B = np.array([[0, 1], [0, 0]], dtype=complex)
GEN_C = np.array([[0, 0], [1, 0]], dtype=complex)
GENERATORS = (GEN_A, GEN_B, GEN_C)


@dataclass(frozen=True)
class EtaPoint:
    a: complex
    b: complex


@dataclass(frozen=True)
class ConicCoverPoint:
    """Point of Z = {e^z = x y - 1}."""

    x: complex
    y: complex
    z: complex

    def residual(self):
        return abs(cmath.exp(self.z) - (self.x * self.y - 1)) / (1 + abs(self.x * self.y - 1))

    def validate(self, tol=1e-9):
        if not self.residual() < tol:
            raise ValueError(f"point is not on the cover, residual {self.residual():.3g}")
        return self


def _ab(p):
    return as_complex(p.a), as_complex(p.b)


def eta0_coefficients(p):
    """(p3, p2, p1, p0, q3, q2, q1, q0) of (x^3 - a x) / (1 - b x^2)."""
    a, b = _ab(p)
    return np.array([1, 0, -a, 0, 0, -b, 0, 1], dtype=complex)


def eta0(p, tol=DEFAULT_TOL):
    a, b = _ab(p)
    if abs(a * b - 1) <= tol.eq_rel * (1 + abs(a * b)):
        raise OnResultantLocus(f"ab = {a * b} lies on the resultant locus")
    c = eta0_coefficients(p)
    return make_map(c[:4], c[4:], tol)


def eta0_signature(p):
    """(mu, lambda) of eta0 via its critical points +-r1, +-r2 in the order (r1, -r1, r2, -r2)."""
    a, b = _ab(p)
    # critical points: b u^2 - (3 - a b) u + a = 0 with u = x^2
    if b == 0:
        raise ValueError("b = 0 lies in the null fibre")
    us = np.roots([b, -(3 - a * b), a])
    rs = [cmath.sqrt(u) for u in us]
    vs = [r * (u - a) / (1 - b * u) for r, u in zip(rs, us)]
    r1, r2 = rs
    v1, v2 = vs
    return Signature(((r1 + r2) / (r1 - r2)) ** 2, ((v1 + v2) / (v1 - v2)) ** 2)


def eta0_pi(p, tol=DEFAULT_TOL):
    """pi(eta0(a, b)); depends on a b only."""
    return pi_of_a(a_from_mu_lambda(eta0_signature(p), tol), tol)


# Tangent directions in the chart (p3, p2, p1, p0, q3, q2, q1), q0 = 1.

def tangent_matrix(p, as_printed=False):
    """Derivatives of the six one-parameter subgroups at eta0(a, b).

    Rows: eta0 o e^{At}, eta0 o e^{Bt}, eta0 o e^{Ct}, e^{At} o eta0, e^{Bt} o eta0, e^{Ct} o eta0.
    ``as_printed`` flips the sign of the last entry of the last row.
    """
    a, b = _ab(p)
    last = a if as_printed else -a
    return np.array([
        [6, 0, -2 * a, 0, 0, -4 * b, 0],
        [0, 3, 0, -a, 0, 0, -2 * b],
        [0, -2 * a, 0, 0, -b, 0, 3],
        [2, 0, -2 * a, 0, 0, 0, 0],
        [0, -b, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, last],
    ], dtype=complex)


ETA_DIRECTIONS = np.array([[0, 0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, 0]], dtype=complex)


def transversality_stack(p, as_printed=False):
    return np.vstack([tangent_matrix(p, as_printed), ETA_DIRECTIONS])


def check_transversality(p, tol=DEFAULT_TOL):
    return numerical_rank(transversality_stack(p), tol) == 7


def chart(f, tol=DEFAULT_TOL):
    """Affine chart normalizing the constant term of the denominator to 1."""
    v = f.vector()
    if abs(v[-1]) <= tol.eq_rel * np.max(np.abs(v)):
        raise ChartSingular("constant term of the denominator vanishes")
    return v[:-1] / v[-1]


def _one_param(gen, side, t):
    """Group element realizing e^{Xt} on the right (precomposition) or left (postcomposition)."""
    e = Moebius(matrix_exp_sl2(t * gen))
    ident = Moebius.identity()
    if side == "right":
        return GroupElement(ident, e)
    # f^g = g1^-1 o f o g2, so postcomposition by e^{Xt} uses g1 = e^{-Xt}
    return GroupElement(e.inverse(), ident)


def finite_difference_row(p, gen, side, h=1e-5, tol=DEFAULT_TOL):
    f = make_map(eta0_coefficients(p)[:4], eta0_coefficients(p)[4:], tol)
    gen = np.asarray(gen, dtype=complex)
    if not np.any(gen):
        return np.zeros(7, dtype=complex)
    plus = chart(act(_one_param(gen, side, h), f, tol), tol)
    minus = chart(act(_one_param(gen, side, -h), f, tol), tol)
    return (plus - minus) / (2 * h)


def finite_difference_tangent_check(p, h=1e-5, tol=DEFAULT_TOL):
    if not (0 < h <= 1e-4):
        raise ValueError("h must lie in (0, 1e-4]")
    fd = np.array([finite_difference_row(p, g, side, h, tol)
                   for side in ("right", "left") for g in GENERATORS])
    dev = []
    for variant in (False, True):
        rows = tangent_matrix(p, as_printed=variant)
        scale = np.maximum(1.0, np.max(np.abs(rows), axis=1))
        dev.append(np.max(np.abs(fd - rows), axis=1) / scale)
    return {"finite_difference": fd, "row_deviation": dev[0], "max_deviation": float(np.max(dev[0])),
            "printed_sign_row_deviation": dev[1]}


# omega and chi

def omega(x, y):
    """(e^{xy} - 1) / x, extended by y at x = 0."""
    x, y = as_complex(x), as_complex(y)
    u = x * y
    if abs(u) < 1e-3:
        # y * sum u^n / (n+1)!
        s, term = 0j, 1 + 0j
        for n in range(8):
            s += term
            term *= u / (n + 2)
        return y * s
    return (cmath.exp(u) - 1) / x


def chi(x, y):
    return as_complex(x), -omega(x, y)


def chi_preimage(a, b, iters=20):
    """y with chi(a, y) = (a, b); needs a b != 1."""
    a, b = as_complex(a), as_complex(b)
    if abs(a * b - 1) < 1e-14:
        raise OnResultantLocus("a b = 1 is not in the image")
    y = -b if abs(a) < 1e-12 else cmath.log(1 - a * b) / a
    for _ in range(iters):
        step = (omega(a, y) + b) / cmath.exp(a * y)
        y -= step
        if abs(step) <= 1e-15 * (1 + abs(y)):
            break
    return y


# phi: eta0(s)^exp(t) and its composition with chi

def _exp_pair(t):
    """Group element from six Lie algebra coordinates (right A, B, C; left A, B, C)."""
    t = np.asarray(t, dtype=complex)
    right = t[0] * GEN_A + t[1] * GEN_B + t[2] * GEN_C
    left = t[3] * GEN_A + t[4] * GEN_B + t[5] * GEN_C
    return GroupElement(Moebius(matrix_exp_sl2(-left)), Moebius(matrix_exp_sl2(right)))


def phi(s, t, tol=DEFAULT_TOL):
    """Chart coordinates of eta0(s)^exp(t)."""
    f = eta0(EtaPoint(*s), tol)
    return chart(act(_exp_pair(t), f, tol), tol)


def composed_map(v, tol=DEFAULT_TOL):
    """C^8 -> chart: (x, y, t) -> phi(chi(x, y), t)."""
    v = np.asarray(v, dtype=complex)
    return phi(chi(v[0], v[1]), v[2:], tol)


def jacobian(fn, v, h=1e-6):
    v = np.asarray(v, dtype=complex)
    cols = []
    for k in range(v.size):
        e = np.zeros_like(v)
        e[k] = h
        cols.append((fn(v + e) - fn(v - e)) / (2 * h))
    return np.array(cols).T


# finite-difference Jacobians carry ~1e-10 noise, so rank needs a looser cutoff
FD_RANK_TOL = ToleranceConfig(rank_rel=1e-6)


def composition_rank(v, h=1e-6):
    return numerical_rank(jacobian(composed_map, v, h), FD_RANK_TOL)


# orbit representatives

def _newton_k(target, k0, iters=40):
    """Solve eta0_pi(k, 1) = target for k by Newton with a complex central difference."""
    k = k0
    for _ in range(iters):
        val = eta0_pi(EtaPoint(k, 1)) - target
        h = 1e-7 * (1 + abs(k))
        der = (eta0_pi(EtaPoint(k + h, 1)) - eta0_pi(EtaPoint(k - h, 1))) / (2 * h)
        step = val / der
        k -= step
        if abs(step) < 1e-12 * (1 + abs(k)):
            break
    return k


def eta0_orbit_representative(f, tol=DEFAULT_TOL, residual_tol=1e-9):
    cls = classify(f, tol)
    if cls.stratum == "TwoValues":
        return EtaPoint(0j, 0j)
    if cls.stratum == "ThreeValues":
        return EtaPoint(1 + 0j, 0j)
    target = cls.pi
    best, best_res = None, math.inf
    for i in range(10):
        for j in range(5):
            k0 = 10 ** (-1 + 3 * i / 9) * cmath.exp(2j * math.pi * (j + 0.5) / 5)
            try:
                k = _newton_k(target, k0)
                res = abs(eta0_pi(EtaPoint(k, 1)) - target) / (1 + abs(target))
            except (ArithmeticError, ValueError, np.linalg.LinAlgError):
                continue
            if res < best_res:
                best, best_res = k, res
            if res < residual_tol:
                try:
                    c = classify(eta0(EtaPoint(k, 1), tol), tol)
                except ValueError:
                    continue
                if c.stratum == "OpenStratum" and abs(c.pi - target) <= 1e-7 * (1 + abs(target)):
                    return EtaPoint(complex(k), 1 + 0j)
    raise SolveFailed(f"no representative found for pi = {target}", best_residual=best_res)


# sprays on Z = {e^z = x y - 1}

def spray_maps(p, t, which):
    x, y, z = p.x, p.y, as_complex(p.z)
    t = as_complex(t)
    if which == 1:
        return ConicCoverPoint(cmath.exp(t) * x, cmath.exp(-t) * y, z)
    if which == 2:
        # (1 + e^{z+ty}) / y rewritten so that y = 0 is harmless
        return ConicCoverPoint(x * cmath.exp(t * y) - omega(y, t), y, z + t * y)
    if which == 3:
        return ConicCoverPoint(x, y * cmath.exp(t * x) - omega(x, t), z + t * x)
    raise ValueError("which must be 1, 2 or 3")


def _vec(p):
    return np.array([p.x, p.y, p.z], dtype=complex)


def spray_derivatives(p, h=1e-6):
    return np.array([(_vec(spray_maps(p, h, j)) - _vec(spray_maps(p, -h, j))) / (2 * h)
                     for j in (1, 2, 3)])


def spray_domination_check(p, h=1e-6, tol=DEFAULT_TOL):
    grad = np.array([-p.y, -p.x, cmath.exp(p.z)])
    # kernel of v -> grad . v (no conjugation)
    _, _, vh = np.linalg.svd(grad.reshape(1, 3))
    basis = vh[1:].conj().T
    coords = basis.conj().T @ spray_derivatives(p, h).T
    return numerical_rank(coords.T, tol) == 2
