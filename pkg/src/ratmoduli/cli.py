"""Command-line interface.

Exit codes: 0 success, 1 negative answer or failed check,
2 unparseable input or forbidden parameter, 3 degenerate input.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from . import dominability as dom
from .algebra import DEFAULT_TOL, ToleranceConfig, numerical_rank
from .errors import ForbiddenValue, ParseError, RatModuliError, SolveFailed
from .invariants import classify, pi_of_a
from .moebius import Moebius
from .ratmap import critical_data, format_complex, format_map_literal, parse_complex, parse_map_literal
from .stabilizers import stabilizer_of
from .suites import SUITES, run_suite
from .table24 import compare_with_reference, table24

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _point(p):
    return None if p.is_infinity else _pair(p.to_complex())


def _matrix(m):
    m = m.normalized() if isinstance(m, Moebius) else np.asarray(m)
    return [[_pair(v) for v in row] for row in np.round(m, 15)]


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _tol(args):
    return ToleranceConfig(eq_rel=args.tol) if args.tol is not None else DEFAULT_TOL


def _number(text):
    return parse_complex(text, 1)


# subcommands

def cmd_classify(args):
    tol = _tol(args)
    f = parse_map_literal(args.map, tol)
    c = classify(f, tol)
    cd = critical_data(f, tol)
    payload = {
        "map": format_map_literal(f),
        "stratum": c.stratum,
        "pi": _pair(c.pi),
        "exceptional": c.exceptional,
        "critical_points": [{"point": _point(p), "multiplicity": m} for p, m in cd.points],
        "critical_values": [{"value": _point(v), "multiplicity": m} for v, m in cd.values],
        "warnings": c.warnings,
    }
    lines = [f"map: {payload['map']}", f"stratum: {c.stratum}", f"pi: {format_complex(c.pi)}",
             f"exceptional: {c.exceptional}"]
    lines += [f"critical point {p} (x{m}) -> {cd.values[cd.pairing[i]][0]}"
              for i, (p, m) in enumerate(cd.points)]
    lines += [f"warning: {w}" for w in c.warnings]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_same_orbit(args):
    tol = _tol(args)
    f, g = parse_map_literal(args.f, tol), parse_map_literal(args.g, tol)
    cf, cg = classify(f, tol), classify(g, tol)
    same = cf.stratum == cg.stratum and (
        cf.stratum != "OpenStratum" or abs(cf.pi - cg.pi) <= args.pi_tol * (1 + abs(cf.pi)))
    verdict = "SAME" if same else "DIFFERENT"
    payload = {"same": same, "strata": [cf.stratum, cg.stratum], "pi": [_pair(cf.pi), _pair(cg.pi)]}
    _emit(args, payload, f"{verdict}\npi(f) = {format_complex(cf.pi)} [{cf.stratum}]\n"
                         f"pi(g) = {format_complex(cg.pi)} [{cg.stratum}]")
    return EXIT_OK if same else EXIT_NEGATIVE


def cmd_verify(args):
    results = run_suite(args.suite, args.seed, args.trials)
    ok = all(r.passed for r in results)
    payload = {"seed": args.seed, "passed": ok, "suites": [r.to_dict() for r in results]}
    lines = []
    for r in results:
        lines.append(f"{r.name}: {'PASS' if r.passed else 'FAIL'} ({r.trials} trials)")
        for key, val in r.residuals.items():
            thr = r.thresholds.get(key)
            shown = f"{int(val)} failures" if thr == "bool" else f"max {val:.3e} (limit {thr:g})"
            lines.append(f"  {key}: {shown}")
        for fail in r.failures[:5]:
            lines.append(f"  failed {fail['check']} at trial {fail['trial']}: "
                         f"{json.dumps(fail['sample'], sort_keys=True)}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_table24(args):
    t = _number(args.t)
    rows = table24(t)
    mismatches = compare_with_reference() if args.check_paper else None
    payload = {"t": _pair(t), "rows": [{
        "targets": list(r.targets), "g": r.formula, "g_of_t": _point(r.g(t)),
        "t0": str(r.t0), "permutation": r.cycles, "matrix": _matrix(r.g)} for r in rows]}
    lines = [f"{'(' + ', '.join(r.targets) + ')':<18} g(x) = {r.formula:<22} t0 = {str(r.t0):<14} {r.cycles}"
             for r in rows]
    if mismatches is not None:
        payload["mismatches"] = mismatches
        lines.append(f"reference check: {len(mismatches)} mismatches")
        lines += [f"  {m}" for m in mismatches]
    _emit(args, payload, "\n".join(lines))
    return EXIT_NEGATIVE if mismatches else EXIT_OK


def cmd_stabilizer(args):
    tol = _tol(args)
    rep = stabilizer_of(parse_map_literal(args.map, tol), tol)
    payload = {"case": rep.case_tag, "order": len(rep.elements), "max_residual": rep.max_residual,
               "permutations": [list(p) for p in rep.permutations],
               "elements": [{"g1": _matrix(g.g1), "g2": _matrix(g.g2)} for g in rep.elements],
               "one_parameter_witnesses": len(rep.one_param_witnesses)}
    lines = [f"case: {rep.case_tag}", f"finite elements: {len(rep.elements)}",
             f"one-parameter witnesses: {len(rep.one_param_witnesses)}",
             f"max fix residual: {rep.max_residual:.3e}"]
    lines += [f"  induced permutation {list(p)}" for p in rep.permutations]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_transversality(args):
    p = dom.EtaPoint(_number(args.a), _number(args.b))
    stack = dom.transversality_stack(p)
    rank = numerical_rank(stack, _tol(args))
    fd = dom.finite_difference_tangent_check(p, args.h)
    payload = {"rank": rank, "transversal": rank == 7, "max_row_deviation": fd["max_deviation"]}
    _emit(args, payload, f"rank {rank} of 7 ({'transversal' if rank == 7 else 'not transversal'})\n"
                         f"finite-difference row deviation {fd['max_deviation']:.3e}")
    return EXIT_OK if rank == 7 else EXIT_NEGATIVE


def cmd_eta0_rep(args):
    tol = _tol(args)
    f = parse_map_literal(args.map, tol)
    rep = dom.eta0_orbit_representative(f, tol)
    target = classify(f, tol).pi
    got = 0j if rep.b == 0 else dom.eta0_pi(rep, tol)
    payload = {"a": _pair(rep.a), "b": _pair(rep.b), "pi": _pair(target), "pi_eta0": _pair(got)}
    _emit(args, payload, f"eta0({format_complex(rep.a)}, {format_complex(rep.b)})\n"
                         f"pi(f) = {format_complex(target)}, pi(eta0) = {format_complex(got)}")
    return EXIT_OK


def cmd_pi(args):
    a = _number(args.a)
    pi = pi_of_a(a, _tol(args))
    _emit(args, {"a": _pair(a), "pi": _pair(pi)}, format_complex(pi))
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--tol", type=float, default=None, help="relative equality tolerance (default 1e-9)")

    parser = argparse.ArgumentParser(prog="ratmoduli", description="Orbits of cubic rational maps.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="stratum, pi and critical data of a map")
    p.add_argument("map", help="literal 'p3,p2,p1,p0 / q3,q2,q1,q0'")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("same-orbit", parents=[common], help="test whether two maps are equivalent")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--pi-tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_same_orbit)

    p = sub.add_parser("verify", parents=[common], help="run a randomized verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table24", parents=[common], help="the 24 maps sending 0, 1, inf into {0, 1, inf, t}")
    p.add_argument("t")
    p.add_argument("--check-paper", action="store_true", help="compare with the embedded reference table")
    p.set_defaults(func=cmd_table24)

    p = sub.add_parser("stabilizer", parents=[common], help="stabilizer of a cubic map")
    p.add_argument("map")
    p.set_defaults(func=cmd_stabilizer)

    p = sub.add_parser("check-transversality", parents=[common], help="rank of the tangent stack at eta0(a, b)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--h", type=float, default=1e-5)
    p.set_defaults(func=cmd_transversality)

    p = sub.add_parser("eta0-rep", parents=[common], help="eta0(a, b) in the orbit of a map")
    p.add_argument("map")
    p.set_defaults(func=cmd_eta0_rep)

    p = sub.add_parser("pi", parents=[common], help="pi of the standard form f_a")
    p.add_argument("a")
    p.set_defaults(func=cmd_pi)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ForbiddenValue) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolveFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (RatModuliError, ZeroDivisionError, OverflowError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
