"""Randomized verification suites behind ``ratmoduli verify``.

Every trial draws from its own Philox stream keyed by (seed, trial index),
so results do not depend on trial order or on how many trials ran before.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import dominability as dom
from . import invariants as inv
from .algebra import DEFAULT_TOL
from .errors import RatModuliError
from .moebius import Moebius
from .ratmap import GroupElement, act, make_map
from .stabilizers import group_closed, is_even, stabilizer_of

SUITES = ("sk-identities", "pi-invariance", "pi-factorization", "transversality",
          "stabilizers", "sprays", "continuity")


def trial_rng(seed, trial):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trial])))


@dataclass
class SuiteResult:
    name: str
    trials: int
    residuals: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def record(self, key, value, threshold, trial, sample):
        cur = self.residuals.get(key, 0.0)
        self.residuals[key] = max(cur, float(value))
        self.thresholds[key] = threshold
        if not value < threshold:
            self.failures.append({"check": key, "trial": trial, "value": float(value), "sample": sample})

    def flag(self, key, ok, trial, sample):
        self.residuals.setdefault(key, 0.0)
        self.thresholds[key] = "bool"
        if not ok:
            self.residuals[key] += 1
            self.failures.append({"check": key, "trial": trial, "sample": sample})

    def to_dict(self):
        return {"suite": self.name, "trials": self.trials, "passed": self.passed,
                "max_residuals": self.residuals, "thresholds": self.thresholds,
                "failures": self.failures[:20]}


# samplers

def random_lambda(rng, lo=1e-2, hi=1e2, margin=1e-3):
    while True:
        lam = math.exp(rng.uniform(math.log(lo), math.log(hi))) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        if abs(lam) > margin and abs(lam - 1) > margin:
            return lam


def random_a(rng, margin=0.05):
    while True:
        a = complex(rng.uniform(-6, 3), rng.uniform(-3, 3))
        if all(abs(a - c) > margin for c in inv.FORBIDDEN_A):
            return a


def random_moebius(rng, radius=2.0, min_det=0.25):
    while True:
        r = radius * np.sqrt(rng.uniform(size=4))
        m = (r * np.exp(2j * np.pi * rng.uniform(size=4))).reshape(2, 2)
        if abs(np.linalg.det(m)) >= min_det:
            return Moebius(m)


def random_group_element(rng):
    return GroupElement(random_moebius(rng), random_moebius(rng))


def random_cover_point(rng, kind="generic"):
    x = complex(*rng.normal(size=2))
    y = complex(*rng.normal(size=2))
    if kind == "x0":
        x = 0j
    elif kind == "y0":
        y = 0j
    branch = 2j * math.pi * int(rng.integers(-2, 3))
    return dom.ConicCoverPoint(x, y, cmath.log(x * y - 1) + branch)


def _c(z):
    return [complex(z).real, complex(z).imag]


# suites

def suite_sk_identities(seed, trials):
    res = SuiteResult("sk-identities", trials)
    for k in range(trials):
        rng = trial_rng(seed, k)
        lam, mu = random_lambda(rng), random_lambda(rng)
        rep = inv.sk_identities_check(lam)
        res.record("identities", rep["max_residual"], 1e-9, k, {"lambda": _c(lam)})
        s_a = inv.s2(lam) + 0.75
        s_b = inv.s_closed_form(lam)
        res.record("s_two_forms", inv.rel_residual(s_a, s_b), 1e-9, k, {"lambda": _c(lam)})
        res.record("product_identity", inv.product_identity_residual(lam, mu), 1e-9, k,
                   {"lambda": _c(lam), "mu": _c(mu)})
    return res


def suite_pi_invariance(seed, trials):
    res = SuiteResult("pi-invariance", trials)
    for k in range(trials):
        rng = trial_rng(seed, k)
        # a within 0.1 of a forbidden value puts critical values inside the ambiguity band
        a = random_a(rng, margin=0.1)
        g = random_group_element(rng)
        sample = {"a": _c(a), "g1": [_c(v) for v in g.g1.m.ravel()], "g2": [_c(v) for v in g.g2.m.ravel()]}
        target = inv.pi_of_a(a)
        try:
            got = inv.classify(act(g, inv.standard_form(a))).pi
        except RatModuliError as exc:
            res.flag("classified", False, k, dict(sample, error=str(exc)))
            continue
        res.record("pi_invariance", abs(got - target) / (1 + abs(target)), 1e-5, k, sample)
    return res


def suite_pi_factorization(seed, trials):
    res = SuiteResult("pi-factorization", trials)
    for k in range(trials):
        rng = trial_rng(seed, k)
        a1, a2 = random_a(rng), random_a(rng)
        pis = [inv.pi_of_a(b) for b in inv.six_a_values(a1)]
        spread = max(abs(p - pis[0]) for p in pis) / max(1.0, abs(pis[0]))
        res.record("six_values", spread, 1e-8, k, {"a": _c(a1)})
        res.record("sigma2_form", inv.rel_residual(inv.pi_symmetrized(a1), pis[0]), 1e-8, k, {"a": _c(a1)})
        sig = inv.mu_lambda_from_a(a1)
        res.record("direct_vs_a_route",
                   inv.rel_residual(inv.pi_from_mu_lambda_direct(sig), inv.pi_of_a(inv.a_from_mu_lambda(sig))),
                   1e-6, k, {"a": _c(a1)})
        res.record("difference_identity", inv.pi_difference_identity_check(a1, a2)["residual"], 1e-8, k,
                   {"a1": _c(a1), "a2": _c(a2)})
    return res


def suite_transversality(seed, trials):
    res = SuiteResult("transversality", trials)
    for k in range(trials):
        rng = trial_rng(seed, k)
        while True:
            a, b = (complex(*rng.uniform(-10, 10, size=2)) for _ in range(2))
            if abs(a) <= 10 and abs(b) <= 10 and abs(a * b - 1) > 1e-6:
                break
        p = dom.EtaPoint(a, b)
        res.flag("rank7", dom.check_transversality(p), k, {"a": _c(a), "b": _c(b)})
        res.record("finite_difference", dom.finite_difference_tangent_check(p, 1e-5)["max_deviation"], 1e-6, k,
                   {"a": _c(a), "b": _c(b)})
    return res


def suite_stabilizers(seed, trials):
    res = SuiteResult("stabilizers", trials)
    rep = stabilizer_of(make_map([1, 0, 0, 0], [0, 0, 0, 1]))
    res.record("x3_witnesses", rep.max_residual, 1e-7, -1, {"map": "x^3"})
    rep = stabilizer_of(make_map([1, 1, 0, 0], [0, 0, 0, 1]))
    res.flag("cusp_order_2", len(rep.elements) == 2 and group_closed(rep.elements), -1, {"map": "x^3+x^2"})
    res.record("cusp_residual", rep.max_residual, 1e-7, -1, {"map": "x^3+x^2"})
    rep = stabilizer_of(inv.standard_form(inv.EXCEPTIONAL_A))
    res.flag("exceptional_order_12", len(rep.elements) == 12, -1, {"a": _c(inv.EXCEPTIONAL_A)})
    res.flag("exceptional_even", sorted(rep.permutations) == sorted(
        p for p in _perms4() if is_even(p)), -1, {"a": _c(inv.EXCEPTIONAL_A)})
    res.record("exceptional_residual", rep.max_residual, 1e-7, -1, {"a": _c(inv.EXCEPTIONAL_A)})
    for k in range(trials):
        rng = trial_rng(seed, k)
        a = random_a(rng, margin=0.1)
        if abs(inv.pi_of_a(a) - inv.EXCEPTIONAL_PI) < 1e-2:
            continue
        rep = stabilizer_of(inv.standard_form(a))
        ok = len(rep.elements) == 4 and group_closed(rep.elements) and all(
            (g * g).distance(GroupElement.identity()) < 1e-6 for g in rep.elements)
        res.flag("klein", ok, k, {"a": _c(a)})
        res.record("klein_residual", rep.max_residual, 1e-7, k, {"a": _c(a)})
    return res


def _perms4():
    import itertools
    return list(itertools.permutations(range(4)))


def suite_sprays(seed, trials):
    res = SuiteResult("sprays", trials)
    kinds = ("generic", "x0", "y0")
    for k in range(trials):
        rng = trial_rng(seed, k)
        p = random_cover_point(rng, kinds[k % 3])
        sample = {"x": _c(p.x), "y": _c(p.y), "z": _c(p.z)}
        for j in (1, 2, 3):
            q = dom.spray_maps(p, 0, j)
            res.record("base_condition", max(abs(q.x - p.x), abs(q.y - p.y), abs(q.z - p.z)), 1e-15, k, sample)
            for _ in range(3):
                t = 5 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
                res.record("cover_equation", dom.spray_maps(p, t, j).residual(), 1e-8, k, dict(sample, t=_c(t)))
        res.flag("domination_rank2", dom.spray_domination_check(p), k, sample)
    return res


def suite_continuity(seed, trials):
    del trials
    res = SuiteResult("continuity", 1)
    rng = trial_rng(seed, 0)
    direction = cmath.exp(2j * math.pi * rng.uniform())
    rep = inv.null_fibre_continuity_probe(6, direction)
    for row in rep["rows"]:
        eps = abs(row["a"] - row["a0"])
        res.record("limit_map_distance", row["map_distance"] / (10 * eps), 1.0, 0, {"a": _c(row["a"])})
        if row["a0"] == 0.0 and eps <= 1e-2:
            res.record("pi_over_10a2", abs(row["pi"]) / (10 * eps ** 2), 1.0, 0, {"a": _c(row["a"])})
    res.flag("monotone", rep["ok"], 0, {"direction": _c(direction)})
    return res


RUNNERS = {
    "sk-identities": (suite_sk_identities, 1000),
    "pi-invariance": (suite_pi_invariance, 1000),
    "pi-factorization": (suite_pi_factorization, 1000),
    "transversality": (suite_transversality, 100),
    "stabilizers": (suite_stabilizers, 20),
    "sprays": (suite_sprays, 100),
    "continuity": (suite_continuity, 1),
}


def run_suite(name, seed=0, trials=None):
    if name == "all":
        return [run_suite(n, seed, trials)[0] for n in SUITES]
    if name not in RUNNERS:
        raise KeyError(f"unknown suite {name!r}")
    fn, default = RUNNERS[name]
    return [fn(seed, default if trials is None else trials)]


__all__ = ["SUITES", "SuiteResult", "run_suite", "trial_rng", "DEFAULT_TOL"]
