"""The 24 Moebius maps sending (0, 1, inf) to an ordered triple from {0, 1, inf, t}.

Formulas and the special parameters t0 are derived symbolically with sympy;
numerical matrices for a given t come from ``from_three_points``.
"""

import functools
import itertools
from dataclasses import dataclass

from .algebra import SpherePoint, as_complex
from .errors import ForbiddenValue
from .moebius import from_three_points

LABELS = ("0", "1", "inf", "t")

# Hand-entered reference rows: targets, g(x), g(t), t0 class, permutation.
REFERENCE_ROWS = (
    (("0", "1", "inf"), "x", "t", "any", "id"),
    (("0", "1", "t"), "t*x/(x+t-1)", "t**2/(2*t-1)", "1/2", "(t inf)"),
    (("0", "inf", "1"), "x/(x-1)", "t/(t-1)", "2", "(1 inf)"),
    (("0", "inf", "t"), "t*x/(x-1)", "t**2/(t-1)", "sixth", "(1 inf t)"),
    (("0", "t", "1"), "t*x/(t*x+1-t)", "t**2/(t**2-t+1)", "sixth", "(1 t inf)"),
    (("0", "t", "inf"), "t*x", "t**2", "-1", "(1 t)"),
    (("1", "0", "inf"), "1-x", "1-t", "1/2", "(0 1)"),
    (("1", "0", "t"), "(t*x-t)/(x-t)", "oo", "any", "(0 1)(inf t)"),
    (("1", "inf", "0"), "1/(1-x)", "1/(1-t)", "sixth", "(0 1 inf)"),
    (("1", "inf", "t"), "(t*x-1)/(x-1)", "t+1", "-1", "(0 1 inf t)"),
    (("1", "t", "0"), "t/((1-t)*x+t)", "1/(2-t)", "2", "(0 1 t inf)"),
    (("1", "t", "inf"), "(t-1)*x+1", "t**2-t+1", "sixth", "(0 1 t)"),
    (("inf", "0", "1"), "(x-1)/x", "(t-1)/t", "sixth", "(0 inf 1)"),
    (("inf", "0", "t"), "t*(x-1)/x", "t-1", "2", "(0 inf t 1)"),
    (("inf", "1", "0"), "1/x", "1/t", "-1", "(0 inf)"),
    (("inf", "1", "t"), "(t*x+1-t)/x", "(t**2-t+1)/t", "sixth", "(0 inf t)"),
    (("inf", "t", "0"), "t/x", "1", "any", "(0 inf)(1 t)"),
    (("inf", "t", "1"), "(x+t-1)/x", "(2*t-1)/t", "1/2", "(0 inf 1 t)"),
    (("t", "0", "1"), "t*(x-1)/(t*x-1)", "t/(t+1)", "-1", "(0 t inf 1)"),
    (("t", "0", "inf"), "t*(1-x)", "t*(1-t)", "sixth", "(0 t 1)"),
    (("t", "1", "0"), "t/((t-1)*x+1)", "t/(t**2-t+1)", "sixth", "(0 t inf)"),
    (("t", "1", "inf"), "(1-t)*x+t", "2*t-t**2", "2", "(0 t)"),
    (("t", "inf", "0"), "t/(1-x)", "t/(1-t)", "1/2", "(0 t 1 inf)"),
    (("t", "inf", "1"), "(x-t)/(x-1)", "0", "any", "(0 t)(1 inf)"),
)


@dataclass(frozen=True)
class T0:
    """Parameters t0 at which the map preserves {0, 1, inf, t0}."""

    kind: str  # "any", "value" or "sixth" (the primitive sixth roots of unity)
    value: object = None  # sympy Rational for kind == "value"

    def __str__(self):
        if self.kind == "value":
            return str(self.value)
        return {"any": "any", "sixth": "exp(+-pi*i/3)"}[self.kind]

    def admits(self, t, tol=1e-9):
        t = complex(t)
        if self.kind == "any":
            return True
        if self.kind == "sixth":
            return abs(t * t - t + 1) <= tol * (1 + abs(t) ** 2)
        return abs(t - complex(self.value)) <= tol * (1 + abs(t))


@dataclass(frozen=True)
class SymbolicRow:
    targets: tuple
    formula: object  # sympy expression in x and t
    image: object  # sympy expression in t, or sympy.oo
    t0: T0
    permutation: tuple  # images of LABELS, in order


@dataclass(frozen=True)
class Table24Row:
    targets: tuple
    points: tuple
    g: object
    formula: str
    image_of_t: complex
    t0: T0
    permutation: dict
    cycles: str


def cycles_of(perm):
    """Cycle notation for a dict label -> label."""
    seen, out = set(), []
    for start in LABELS:
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cyc, cur = [], start
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = perm[cur]
        out.append("(" + " ".join(cyc) + ")")
    return "".join(out) or "id"


def parse_cycles(text):
    perm = {lab: lab for lab in LABELS}
    text = text.strip()
    if text == "id":
        return perm
    for chunk in text.strip("()").split(")("):
        cyc = chunk.split()
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return perm


@functools.lru_cache(maxsize=1)
def symbolic_rows():
    import sympy as sp

    t, x = sp.symbols("t x")
    vec = {"0": (sp.Integer(0), sp.Integer(1)), "1": (sp.Integer(1), sp.Integer(1)),
           "inf": (sp.Integer(1), sp.Integer(0)), "t": (t, sp.Integer(1))}
    rows = []
    for trip in itertools.permutations(LABELS, 3):
        z1, z2, z3 = (sp.Matrix(vec[lab]) for lab in trip)
        k3, k1 = sp.Matrix.hstack(z3, z1).LUsolve(z2)
        m = sp.Matrix.hstack(sp.simplify(k3) * z3, sp.simplify(k1) * z1)
        formula = sp.factor(sp.cancel((m[0, 0] * x + m[0, 1]) / (m[1, 0] * x + m[1, 1])))
        num = sp.expand(m[0, 0] * t + m[0, 1])
        den = sp.expand(m[1, 0] * t + m[1, 1])
        image = sp.oo if sp.simplify(den) == 0 else sp.factor(sp.cancel(num / den))
        rest = next(lab for lab in LABELS if lab not in trip)
        rz, rw = vec[rest]
        eq = sp.factor(sp.cancel(sp.together(num * rw - den * rz)))
        if sp.simplify(eq) == 0:
            t0 = T0("any")
        else:
            roots = {r for r in sp.roots(sp.Poly(sp.numer(sp.together(eq)), t)) if r not in (0, 1)}
            if roots == set(sp.roots(t ** 2 - t + 1, t)):
                t0 = T0("sixth")
            elif len(roots) == 1:
                t0 = T0("value", next(iter(roots)))
            else:
                raise AssertionError(f"unexpected t0 set {roots} for {trip}")
        perm = dict(zip(LABELS, trip + (rest,)))
        rows.append(SymbolicRow(trip, formula, image, t0, tuple(perm[lab] for lab in LABELS)))
    return tuple(rows)


def _label_point(label, t):
    return {"0": SpherePoint.of(0), "1": SpherePoint.of(1),
            "inf": SpherePoint(1, 0), "t": SpherePoint.of(t)}[label]


def row_map(targets, t):
    """Numerical Moebius for one row at parameter t."""
    return from_three_points(*(_label_point(lab, t) for lab in targets))


def check_t(t):
    t = as_complex(t)
    if abs(t) < 1e-12 or abs(t - 1) < 1e-12:
        raise ForbiddenValue(f"t = {t} is not allowed")
    return t


def table24(t):
    t = check_t(t)
    out = []
    for row in symbolic_rows():
        g = row_map(row.targets, t)
        perm = dict(zip(LABELS, row.permutation))
        out.append(Table24Row(
            targets=row.targets,
            points=tuple(_label_point(lab, t) for lab in row.targets),
            g=g,
            formula=str(row.formula),
            image_of_t=g(t).to_complex(),
            t0=row.t0,
            permutation=perm,
            cycles=cycles_of(perm),
        ))
    return out


def compare_with_reference():
    """Exact comparison of the derived rows with REFERENCE_ROWS; returns mismatch strings."""
    import sympy as sp

    t, x = sp.symbols("t x")
    ns = {"t": t, "x": x, "oo": sp.oo}
    derived = {row.targets: row for row in symbolic_rows()}
    problems = []
    if len(derived) != 24 or len(REFERENCE_ROWS) != 24:
        problems.append("row count differs from 24")
    for targets, g_ref, img_ref, t0_ref, perm_ref in REFERENCE_ROWS:
        row = derived.get(targets)
        if row is None:
            problems.append(f"{targets}: missing")
            continue
        if sp.simplify(row.formula - sp.sympify(g_ref, locals=ns)) != 0:
            problems.append(f"{targets}: g(x) {row.formula} != {g_ref}")
        img = sp.sympify(img_ref, locals=ns)
        if (img == sp.oo) != (row.image == sp.oo) or (img != sp.oo and sp.simplify(row.image - img) != 0):
            problems.append(f"{targets}: g(t) {row.image} != {img_ref}")
        if t0_ref in ("any", "sixth"):
            ok = row.t0.kind == t0_ref
        else:
            ok = row.t0.kind == "value" and sp.simplify(row.t0.value - sp.sympify(t0_ref)) == 0
        if not ok:
            problems.append(f"{targets}: t0 {row.t0} != {t0_ref}")
        if dict(zip(LABELS, row.permutation)) != parse_cycles(perm_ref):
            problems.append(f"{targets}: permutation {cycles_of(dict(zip(LABELS, row.permutation)))} != {perm_ref}")
    return problems
