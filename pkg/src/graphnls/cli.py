"""Command-line front end (``graphnls`` / ``python -m graphnls``).

Subcommands: ``solve``, ``scan-mass``, ``check`` and ``selftest``.  Reports
go to standard output as JSON, scans as CSV.  Exit status 2 means the input
could not be used (bad spec file, bad flags); it never encodes a verdict.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time

from . import criteria
from .errors import GraphNLSError
from .functional import soliton_params
from .graph import build_mesh
from .scan import (
    ScanRow,
    auto_resolution,
    classify,
    core_summary,
    mass_grid,
    max_relative_concavity_defect,
    scan_mass,
    solve_at,
    threshold_estimates,
)
from .solver import FlowParams
from .specfile import load_spec

CHECKS = ("existence-large", "existence-small", "nonexistence", "assumption-h", "nfork-window")


class UsageError(Exception):
    pass


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {n}")
    return n


def _add_flow_flags(sp: argparse.ArgumentParser) -> None:
    g = sp.add_argument_group("discretisation and flow")
    g.add_argument("--h", type=_positive, help="grid spacing (default: adapted to the soliton width)")
    g.add_argument("--L", type=_positive, help="half-line truncation length (default: soliton decay to 1e-12)")
    g.add_argument("--tau", type=_positive, help="initial flow step")
    g.add_argument("--max-iters", type=_positive_int, default=FlowParams.max_iters)
    g.add_argument("--seed", type=int, default=0, help="seed of the random start")
    g.add_argument("--scheme", choices=("implicit", "explicit"), default="implicit")


def _flow_params(args) -> FlowParams:
    return FlowParams(step=args.tau, max_iters=args.max_iters, seed=args.seed, scheme=args.scheme)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphnls", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="log per-start progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="minimise the energy at one mass")
    sp.add_argument("spec")
    sp.add_argument("--p", type=float, default=4.0)
    sp.add_argument("--mu", type=_positive, required=True)
    sp.add_argument("--gap-tol", type=_positive, default=1e-4)
    sp.add_argument("--dump", metavar="PATH", help="write edge_id,coordinate,value rows of the minimiser")
    _add_flow_flags(sp)

    sp = sub.add_parser("scan-mass", help="minimum energy on a logarithmic grid of masses (CSV)")
    sp.add_argument("spec")
    sp.add_argument("--p", type=float, default=4.0)
    sp.add_argument("--mu-min", type=_positive, required=True)
    sp.add_argument("--mu-max", type=_positive, required=True)
    sp.add_argument("--steps", type=int, default=20)
    sp.add_argument("--gap-tol", type=_positive, default=1e-4)
    sp.add_argument("--jobs", type=_positive_int, default=1)
    sp.add_argument("--out", metavar="PATH", help="write the CSV here instead of standard output")
    _add_flow_flags(sp)

    sp = sub.add_parser("check", help="evaluate one of the existence or nonexistence tests")
    sp.add_argument("which", choices=CHECKS)
    sp.add_argument("spec", nargs="?", help="graph file (not used by nfork-window)")
    sp.add_argument("--p", type=float, default=4.0)
    sp.add_argument("--mu", type=_positive)
    sp.add_argument("--epsilon", type=_positive)
    sp.add_argument("--n", type=_positive_int, help="number of fork edges (nfork-window)")
    sp.add_argument("--l", type=_positive, help="fork edge length (nfork-window)")
    sp.add_argument("--floor-fraction", type=_positive, default=0.9,
                    help="existence-large: keep w above this fraction of its peak")
    sp.add_argument("--h", type=_positive)
    sp.add_argument("--L", type=_positive)

    sp = sub.add_parser("selftest", help="fast consistency checks")
    sp.add_argument("--corrupt-soliton", type=float, default=0.0, help=argparse.SUPPRESS)
    return ap


# --- commands -------------------------------------------------------------------------


def cmd_solve(args, out) -> int:
    problem = load_spec(args.spec)
    t0 = time.perf_counter()
    rep, mesh, _ = solve_at(problem, args.p, args.mu, _flow_params(args), args.h, args.L)
    summary = rep.summary()
    summary.update(
        mu=args.mu,
        p=args.p,
        h=mesh.h,
        L=mesh.L,
        n_dofs=mesh.n_dofs,
        gap_tol=args.gap_tol,
        classification=classify(rep.gap, rep.threshold, rep.converged, args.gap_tol).value,
        seconds=round(time.perf_counter() - t0, 3),
    )
    json.dump(summary, out, indent=2)
    out.write("\n")
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write("edge_id,coordinate,value\n")
            for eid, x, v in mesh.rows(rep.minimizer.values):
                fh.write(f"{eid},{x:.17g},{v:.17g}\n")
    return 0


def write_scan(rows: list[ScanRow], meta: dict, out) -> None:
    lower, upper = threshold_estimates(rows)
    meta = dict(meta)
    meta["mu_lower_star"] = "none" if lower is None else format(lower, ".17g")
    meta["mu_upper_star"] = "none" if upper is None else format(upper, ".17g")
    defect = max_relative_concavity_defect(rows)
    meta["max_concavity_defect"] = "none" if defect == -math.inf else format(defect, ".6g")
    for k, v in meta.items():
        out.write(f"# {k}={v}\n")
    out.write(ScanRow.CSV_HEADER + "\n")
    for r in rows:
        out.write(r.csv() + "\n")


def cmd_scan(args, out) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if not args.mu_min < args.mu_max:
        raise UsageError("--mu-min must be smaller than --mu-max")
    problem = load_spec(args.spec)
    soliton_params(args.p)  # reject a bad p before spawning workers
    masses = mass_grid(args.mu_min, args.mu_max, args.steps)
    rows = scan_mass(problem, args.p, masses, _flow_params(args), h=args.h, L=args.L,
                     gap_tol=args.gap_tol, jobs=args.jobs)
    meta = {
        "spec": args.spec,
        "p": args.p,
        "gap_tol": args.gap_tol,
        "h": "auto" if args.h is None else args.h,
        "L": "auto" if args.L is None else args.L,
        "scheme": args.scheme,
        "seed": args.seed,
    }
    if args.out:
        with open(args.out, "w") as fh:
            write_scan(rows, meta, fh)
    else:
        write_scan(rows, meta, out)
    return 0


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"check {args.which} needs {', '.join(missing)}")


def cmd_check(args, out) -> int:
    which = args.which
    if which == "nfork-window":
        _need(args, "n", "l", "epsilon")
        report = {"check": which, **criteria.nfork_window(args.n, args.l, args.epsilon, args.p).as_dict()}
        json.dump(report, out, indent=2)
        out.write("\n")
        return 0
    if args.spec is None:
        raise UsageError(f"check {which} needs a spec file")
    problem = load_spec(args.spec)
    g = problem.graph
    report: dict = {"check": which, **core_summary(g)}
    if which == "assumption-h":
        report["assumption_h"] = criteria.assumption_h(g)
    elif which == "nonexistence":
        _need(args, "mu", "epsilon")
        h, L = _resolution(args, g)
        w = problem.potential_on(build_mesh(g, h, L))
        sup = 0.0 if w is None else w.sup_norm
        report.update(criteria.nonexistence_condition(g, sup, args.p, args.mu, args.epsilon).as_dict())
    elif which == "existence-large":
        _need(args, "mu")
        h, L = _resolution(args, g)
        mesh = build_mesh(g, h, L)
        w = problem.potential_on(mesh)
        if w is None:
            raise UsageError("existence-large needs a potential in the spec file")
        site = criteria.large_mass_site(w, args.floor_fraction)
        v = criteria.candidate_large_mass(w, args.p, args.mu, args.floor_fraction)
        report.update(criteria.existence_criterion(v, w, args.p).as_dict())
        report.update(center_edge=site.edge_id, center=site.center, half_width=site.half_width,
                      kappa=site.kappa, h=mesh.h)
    elif which == "existence-small":
        _need(args, "mu")
        h, L = _resolution(args, g)
        mesh = build_mesh(g, h, L)
        w = problem.potential_on(mesh)
        v, m = criteria.candidate_small_mass(mesh, args.p, args.mu)
        report.update(criteria.existence_criterion(v, w, args.p).as_dict())
        report["m"] = m
        if not criteria.compact_core(g).is_empty:
            ineq = criteria.small_mass_inequality(g, args.p, m, 0.0 if w is None else w)
            report.update(inequality_lhs=ineq.lhs, inequality_rhs=ineq.rhs,
                          inequality_satisfied=bool(ineq.satisfied))
        report.update(h=mesh.h, L=mesh.L)
    json.dump(report, out, indent=2)
    out.write("\n")
    return 0


def _resolution(args, g):
    h, L = auto_resolution(g, args.p, args.mu if args.mu is not None else 1.0)
    h = args.h or h
    return h, args.L or max(L, 10 * h)


def cmd_selftest(args, out) -> int:
    from .selftest import run_selftest

    results = run_selftest(corrupt_soliton=args.corrupt_soliton)
    width = max(len(r.name) for r in results)
    for r in results:
        out.write(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}\n")
    failed = sum(not r.passed for r in results)
    out.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return 1 if failed else 0


COMMANDS = {"solve": cmd_solve, "scan-mass": cmd_scan, "check": cmd_check, "selftest": cmd_selftest}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except (GraphNLSError, UsageError) as exc:
        print(f"graphnls {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
