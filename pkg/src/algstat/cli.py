"""Command-line entry point: ``algstat <group> <command> [options]``.

Every command prints (or writes to ``--out``) one JSON report.  Exit status
is 0 on success, 1 on a domain error (with a JSON error report) and 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from algstat import __version__


class UsageError(Exception):
    pass


def _common(suppress):
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="base RNG seed (default 0)")
    p.add_argument("--threads", type=int, default=d(1), help="cap on BLAS worker threads")
    p.add_argument("--out", default=d(None), help="write the report here instead of stdout")
    p.add_argument("--quiet", action="store_true", default=d(False), help="do not echo the report")
    p.add_argument("--no-wall-time", action="store_true", default=d(False),
                   help="omit wall_time so repeated runs are byte-identical")
    return p


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rat_list(text):
    from fractions import Fraction

    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")


def build_parser():
    common = _common(suppress=True)
    parser = argparse.ArgumentParser(prog="algstat", parents=[_common(suppress=False)],
                                     description="Exact and numerical experiments in algebraic statistics.")
    parser.add_argument("--version", action="version", version=f"algstat {__version__}")
    groups = parser.add_subparsers(dest="group", metavar="GROUP")
    groups.required = True

    def sub(group_parsers, name, help_):
        return group_parsers.add_parser(name, parents=[common], help=help_)

    inv = groups.add_parser("invariants", help="rank-4 tensor invariants").add_subparsers(dest="command", metavar="CMD")
    inv.required = True
    p = sub(inv, "check", "evaluate all quintics and Strassen invariants on a 4x4x4 table")
    p.add_argument("--table", required=True)
    p = sub(inv, "expand", "expand a symbolic invariant")
    p.add_argument("--which", choices=["quintic", "strassen"], required=True)
    p.add_argument("--count-terms", action="store_true")
    p = sub(inv, "dim", "span dimension by evaluation rank over F_p")
    p.add_argument("--family", choices=["quintic", "strassen"], required=True)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--prime", type=int, default=None)

    mle = groups.add_parser("mle", help="likelihood computations").add_subparsers(dest="command", metavar="CMD")
    mle.required = True
    p = sub(mle, "plane", "ML degree of a plane curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--u", type=_rat_list, required=True)
    p = sub(mle, "detrank", "critical points on a determinantal hypersurface")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--starts", type=int, default=5000)
    p = sub(mle, "em", "EM for the rank-r latent class model")
    p.add_argument("--u", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--starts", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iters", type=int, default=10000)
    p = sub(mle, "check", "projected likelihood gradient at a rank-r table")
    p.add_argument("--p", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--r", type=int, required=True)

    gs = groups.add_parser("gaussoid", help="Gaussian CI structures").add_subparsers(dest="command", metavar="CMD")
    gs.required = True
    p = sub(gs, "enumerate", "all gaussoids for n = 3 or 4")
    p.add_argument("--n", type=int, choices=[3, 4], required=True)
    p = sub(gs, "represent", "search for a certified PD witness")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--statements", required=True, help='e.g. "1,2|3;2,3|4"; use "" for the empty set')
    p.add_argument("--budget", type=int, default=50)
    p = sub(gs, "entropy", "entropy vector, submodular check and tight faces")
    p.add_argument("--sigma", required=True)
    p = sub(gs, "fivecycle", "the five-cycle experiment")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--starts", type=int, default=20)

    ci = groups.add_parser("ci", help="discrete CI").add_subparsers(dest="command", metavar="CMD")
    ci.required = True
    p = sub(ci, "signature", "exact CI signature of a table")
    p.add_argument("--table", required=True)
    p = sub(ci, "search", "positive rational table with a given signature")
    p.add_argument("--dims", type=_int_list, required=True)
    p.add_argument("--signature", required=True)
    p.add_argument("--budget", type=int, default=200)
    return parser


def _read(path):
    with open(path) as fh:
        return json.load(fh)


def _matrix_arg(path, key):
    data = _read(path)
    if isinstance(data, dict):
        data = data.get(key, data.get("entries"))
    return data


# -- command handlers: each returns (result dict, config dict) ----------

def _invariants_check(a):
    from algstat.invariants import vanishing_report
    from algstat.tensors import Table3

    return vanishing_report(Table3.from_json(_read(a.table))), {"table": a.table}


def _invariants_expand(a):
    from algstat.invariants import quintic_expand, strassen_expand

    poly = quintic_expand() if a.which == "quintic" else strassen_expand()
    res = {"terms": len(poly.terms), "degree": poly.degree()}
    if not a.count_terms:
        res["variables_used"] = sum(1 for k in range(len(poly.variables)) if poly.degree_in(k) > 0)
        res["polynomial"] = str(poly)
    return res, {"which": a.which, "count_terms": a.count_terms}


def _invariants_dim(a):
    from algstat.algebra.finite_field import BLAS_PRIME
    from algstat.invariants import EXPECTED_SPAN, span_dimension

    prime = a.prime or BLAS_PRIME
    dim = span_dimension(a.family, n_polys=a.samples, n_points=a.samples, prime=prime, seed=a.seed)
    return ({"dimension": dim, "expected": EXPECTED_SPAN[a.family]},
            {"family": a.family, "samples": a.samples, "prime": prime})


def _mle_plane(a):
    from algstat.algebra.polynomial import parse_poly
    from algstat.mle.plane import PLANE_VARS, ml_degree_plane

    cs = ml_degree_plane(parse_poly(a.curve, PLANE_VARS), a.u, seed=a.seed)
    res = cs.to_json()
    res["ml_degree"] = res.pop("count")
    return res, {"curve": a.curve, "u": [str(x) for x in a.u]}


def _mle_detrank(a):
    from algstat.mle.determinantal import det_critical_points

    cs = det_critical_points(a.m, a.n, a.r, _matrix_arg(a.u, "u"), n_starts=a.starts, seed=a.seed)
    res = cs.to_json()
    res["ml_degree_lower_bound"] = res["count"]
    return res, {"m": a.m, "n": a.n, "r": a.r, "u": a.u, "starts": a.starts}


def _mle_em(a):
    from algstat.mle.em import em_low_rank

    res = em_low_rank(_matrix_arg(a.u, "u"), a.r, n_starts=a.starts, max_iters=a.max_iters, tol=a.tol, seed=a.seed)
    return res.to_json(), {"u": a.u, "r": a.r, "starts": a.starts, "tol": a.tol, "max_iters": a.max_iters}


def _mle_check(a):
    from algstat.io import parse_rat
    from algstat.mle.likelihood import check_critical

    p = [[parse_rat(x) if isinstance(x, str) else x for x in row] for row in _matrix_arg(a.p, "p")]
    return check_critical(p, _matrix_arg(a.u, "u"), a.r), {"p": a.p, "u": a.u, "r": a.r}


def _gaussoid_enumerate(a):
    from algstat.gaussian_ci.axioms import enumerate_gaussoids

    found = enumerate_gaussoids(a.n)
    return {"count": len(found), "gaussoids": [g.to_json()["statements"] for g in found]}, {"n": a.n}


def _gaussoid_represent(a):
    from algstat.gaussian_ci.represent import find_representation
    from algstat.gaussian_ci.statements import GaussoidCandidate

    stmts = [s for s in a.statements.split(";") if s.strip()]
    target = GaussoidCandidate.from_statements(a.n, stmts)
    res = find_representation(target, budget=a.budget, seed=a.seed)
    return res.to_json(), {"n": a.n, "statements": [str(s) for s in target.statements()], "budget": a.budget}


def _gaussoid_entropy(a):
    from algstat.gaussian_ci.covariance import CovMatrix, gaussoid_of, tight_faces
    from algstat.gaussian_ci.entropy import entropy_vector, submodular_check

    S = CovMatrix.from_json(_read(a.sigma))
    h = entropy_vector(S)
    tight = tight_faces(S)
    return ({"entropy": h.to_json(), "submodular": submodular_check(h).to_json(),
             "tight_faces": tight.to_json()["statements"],
             "tight_faces_equal_gaussoid": tight == gaussoid_of(S)}, {"sigma": a.sigma})


def _gaussoid_fivecycle(a):
    from algstat.gaussian_ci.fivecycle import five_cycle_experiment

    res = five_cycle_experiment(a.samples, seed=a.seed, n_starts=a.starts)
    res.pop("seconds", None)
    return res, {"samples": a.samples, "starts": a.starts}


def _ci_signature(a):
    from algstat.discrete_ci import TableN, ci_signature

    return ci_signature(TableN.from_json(_read(a.table))).to_json(), {"table": a.table}


def _ci_search(a):
    from algstat.discrete_ci import CISignature, strict_model_search

    sig = CISignature.from_json(_read(a.signature))
    if tuple(sig.dims) != tuple(a.dims):
        raise ValueError(f"--dims {a.dims} disagree with the signature dims {list(sig.dims)}")
    table, info = strict_model_search(sig, budget=a.budget, seed=a.seed)
    return ({"found": table is not None, "table": table.to_json() if table else None, **info},
            {"dims": a.dims, "signature": a.signature, "budget": a.budget})


HANDLERS = {
    ("invariants", "check"): _invariants_check,
    ("invariants", "expand"): _invariants_expand,
    ("invariants", "dim"): _invariants_dim,
    ("mle", "plane"): _mle_plane,
    ("mle", "detrank"): _mle_detrank,
    ("mle", "em"): _mle_em,
    ("mle", "check"): _mle_check,
    ("gaussoid", "enumerate"): _gaussoid_enumerate,
    ("gaussoid", "represent"): _gaussoid_represent,
    ("gaussoid", "entropy"): _gaussoid_entropy,
    ("gaussoid", "fivecycle"): _gaussoid_fivecycle,
    ("ci", "signature"): _ci_signature,
    ("ci", "search"): _ci_search,
}


def _emit(report, args):
    text = json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n"
    if args.out:
        if args.group == "gaussoid" and args.command == "enumerate" and args.out.endswith(".jsonl"):
            with open(args.out, "w") as fh:
                for g in report.get("gaussoids", []):
                    fh.write(json.dumps({"n": args.n, "statements": g}) + "\n")
        else:
            with open(args.out, "w") as fh:
                fh.write(text)
    if not args.quiet:
        sys.stdout.write(text)


def _json_default(obj):
    import numpy as np

    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        sys.stderr.write("algstat: error: a command group is required\n")
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, str(max(1, args.threads)))
    meta = {
        "tool": "algstat",
        "version": __version__,
        "command": f"{args.group} {args.command}",
        "seed": args.seed,
        "threads": args.threads,
    }
    t0 = time.perf_counter()
    try:
        result, config = HANDLERS[(args.group, args.command)](args)
    except (ValueError, ArithmeticError, TypeError, OSError, KeyError, AssertionError) as exc:
        meta["config"] = {}
        if not args.no_wall_time:
            meta["wall_time"] = time.perf_counter() - t0
        report = {"error": {"type": type(exc).__name__, "message": str(exc)}, "meta": meta}
        _emit(report, args)
        return 1
    meta["config"] = config
    if not args.no_wall_time:
        meta["wall_time"] = time.perf_counter() - t0
    report = dict(result)
    report["meta"] = meta
    _emit(report, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
