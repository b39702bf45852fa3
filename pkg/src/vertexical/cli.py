"""Command line entry point: ``vertexical {check,reduce,simulate,verify-vertexical}``.

Exit codes: 0 success/pass, 1 a checked property is false, 2 parse or usage
error, 3 numerical indeterminacy.
"""

from __future__ import annotations

import argparse
import io
import sys

import numpy as np

from . import lp
from .diagnostics import verify_factorization
from .dynamics import sample_rate_path, simulate, SCHEMES
from .fileformat import (
    CrnDocument, ParseError, digest, dumps_report, format_crn, read_crn, report_document,
)
from .network import orthogonal_residual
from .reduction import NotProjectableError, Projection, project_system, projected_rates, reduce_network
from .structure import ClassificationReport, TooLargeError, classify

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INDETERMINATE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(doc: dict, out_path):
    text = dumps_report(doc)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _keep(doc: CrnDocument, names):
    kept = [s for part in names for s in part.replace(",", " ").split()]
    unknown = [s for s in kept if s not in doc.network.species]
    if not kept or unknown:
        raise UsageError(f"--keep needs declared species, got {kept}")
    return kept


def verify_projective(report: ClassificationReport, net, max_reactions: int) -> list:
    """Re-classify every single-species removal and list lost properties."""
    checks = []
    if net.n_species < 2:
        return checks
    flags = report.flags()
    for s in net.species:
        kept = [t for t in net.species if t != s]
        reduced = classify(reduce_network(net, kept), max_reactions)
        lost = [k for k, v in flags.items() if v is True and getattr(reduced, k) is False]
        undecided = [k for k, v in flags.items() if v is True and getattr(reduced, k) is None]
        checks.append({"removed": s, "reduced": reduced.to_dict(), "lost": lost, "undecided": undecided})
    return checks


def cmd_check(args) -> int:
    doc, data = read_crn(args.path)
    try:
        report = classify(doc.network, args.max_reactions)
    except TooLargeError as err:
        raise UsageError(str(err))
    payload = report.to_dict()
    code = EXIT_INDETERMINATE if report.indeterminate else EXIT_OK
    if args.verify_projective:
        checks = verify_projective(report, doc.network, args.max_reactions)
        payload["projective_checks"] = checks
        if any(c["lost"] for c in checks):
            code = EXIT_FALSE
        elif any(c["undecided"] for c in checks):
            code = EXIT_INDETERMINATE
    _emit(report_document("check", digest(data), "classification", payload,
                          {"verify_projective": args.verify_projective}), args.report)
    return code


def cmd_reduce(args) -> int:
    doc, data = read_crn(args.path)
    kept = _keep(doc, args.keep)
    N = doc.system
    try:
        reduced = project_system(N, kept)
    except NotProjectableError as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_USAGE
    p = Projection(N.species, kept)
    repulsing = None if doc.repulsing is None else frozenset(s for s in doc.repulsing if s in p.kept)
    text = format_crn(CrnDocument(reduced, repulsing))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    net = reduced.network
    groups = projected_rates(N, kept)
    reactions = []
    for r in net.reactions:
        reactions.append({
            "reaction": net.format_reaction(r),
            "rate_hull": str(reduced.tempering[r]),
            "sources": [{"reaction": N.network.format_reaction(src), "rate": str(k)} for src, k in groups[r]],
        })
    payload = {"kept": list(p.kept), "removed": list(p.removed), "reactions": reactions,
               "base_point": reduced.base_point, "merge_rule": "hull"}
    if args.report:
        _emit(report_document("reduce", digest(data), "reduction", payload, {"keep": list(p.kept)}),
              args.report)
    return EXIT_OK


def _simulate(doc, args):
    N = doc.system
    x_init = N.base_point if args.x_init is None else np.array(
        [float(v) for v in args.x_init.replace(",", " ").split()])
    dt = args.dt if args.dt is not None else args.t_end
    path = sample_rate_path(N, dt, args.t_end, args.seed, args.scheme)
    return simulate(N, x_init, path, args.t_end, args.h)


def _sim_params(args):
    return {"t_end": args.t_end, "h": args.h, "dt": args.dt, "scheme": args.scheme,
            "seed": args.seed, "x_init": args.x_init}


def cmd_simulate(args) -> int:
    doc, data = read_crn(args.path)
    traj = _simulate(doc, args)
    net = doc.network
    buf = io.StringIO()
    buf.write(",".join(["t"] + [f"x_{s}" for s in net.species]) + "\n")
    for t, x in zip(traj.times, traj.states):
        buf.write(",".join(repr(float(v)) for v in (t, *x)) + "\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    x0 = traj.states[0]
    residual = max(orthogonal_residual(net, x0, x) for x in traj.states)
    payload = {"status": traj.status, "message": traj.message, "n_samples": len(traj),
               "t_last": traj.times[-1], "final_state": traj.states[-1],
               "conservation_residual_max": residual}
    _emit(report_document("simulate", digest(data), "simulation", payload, _sim_params(args)), args.report)
    return EXIT_OK if not traj.aborted else EXIT_FALSE


def cmd_verify_vertexical(args) -> int:
    doc, data = read_crn(args.path)
    kept = _keep(doc, args.keep)
    if set(kept) == set(doc.network.species):
        raise UsageError("--keep must be a proper subset of the species")
    traj = _simulate(doc, args)
    reduced = None
    if args.against:
        against, _ = read_crn(args.against)
        reduced = against.system
    report = verify_factorization(doc.system, traj, kept, args.eps, args.tol, reduced=reduced)
    payload = report.to_dict()
    payload["trajectory_status"] = traj.status
    params = dict(_sim_params(args), keep=kept, eps=args.eps, tol=args.tol, against=args.against)
    _emit(report_document("verify-vertexical", digest(data), "factorization", payload, params), args.report)
    return EXIT_OK if report.passed else EXIT_FALSE


def _add_sim_flags(p):
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("--dt", type=float, default=None, help="rate piece length (default: t-end)")
    p.add_argument("--scheme", choices=SCHEMES, default="midpoint")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x-init", default=None, help="comma-separated initial state (default: x0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vertexical", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify a network")
    p.add_argument("path")
    p.add_argument("--verify-projective", action="store_true")
    p.add_argument("--max-reactions", type=int, default=12)
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reduce", help="project a system onto kept species")
    p.add_argument("path")
    p.add_argument("--keep", nargs="+", required=True)
    p.add_argument("--out", help="write the reduced .crn here instead of stdout")
    p.add_argument("--report")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("simulate", help="integrate the mass-action inclusion")
    p.add_argument("path")
    _add_sim_flags(p)
    p.add_argument("--out", help="CSV trajectory output")
    p.add_argument("--report")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-vertexical", help="check block segments against the reduced system")
    p.add_argument("path")
    p.add_argument("--keep", nargs="+", required=True)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--against", help="reduced .crn to check against instead of the computed projection")
    _add_sim_flags(p)
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify_vertexical)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UsageError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_USAGE
    except lp.IndeterminateError as err:
        sys.stderr.write(f"indeterminate: {err}\n")
        return EXIT_INDETERMINATE
    except (OSError, ValueError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
