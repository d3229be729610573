"""Command-line surface: gen / fit / certify / sdp-export / plot."""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .certificate import DRConfig, certify, gamma_to_Gamma
from .geometry import Dataset, LineParams, canonicalize, gm_cost, tls_cost
from .io import (
    dumps_tree,
    loads_tree,
    read_dataset_csv,
    read_truth_sidecar,
    write_dataset_csv,
    write_truth_sidecar,
)
from .irls import run_irls
from .lifting import build_lifted
from .oracle import grid_search
from .sdp import build_sdp, extract_rank1, solve_sdp
from .sdpa import export_sdpa
from .synth import SyntheticSpec, generate
from .tls import solve_tls

SDP_MAX_POINTS = 25


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1 (argparse defaults to 2)
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _line_tree(line: LineParams) -> dict:
    return {"a": float(line.a), "b": float(line.b), "c": float(line.c)}


def _line_from_tree(tree: dict) -> LineParams:
    return LineParams(float(tree["a"]), float(tree["b"]), float(tree["c"]))


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    try:
        spec = SyntheticSpec(
            n_total=args.n_total,
            n_outliers=args.n_outliers,
            true_line=LineParams(*args.line),
            inlier_noise_sigma=args.sigma,
            outlier_box=args.box,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d, mask = generate(spec)
    out = args.out or "dataset.csv"
    write_dataset_csv(out, d)
    truth_out = args.truth_out or (out + ".truth.csv")
    write_truth_sidecar(truth_out, canonicalize(spec.true_line), d, mask)
    print(f"wrote {d.n} points to {out} (truth sidecar: {truth_out})")
    return 0


def _fit_once(args, d: Dataset):
    """Run the selected method; returns (line, extras dict for the report)."""
    if args.method == "tls":
        sol = solve_tls(d)
        return sol.line, {}
    if args.method == "irls":
        res = run_irls(d)
        return res.line, {"weights": [float(w) for w in res.weights]}
    if args.method == "sdp":
        if d.n > SDP_MAX_POINTS:
            raise UsageError(
                f"sdp method supports at most {SDP_MAX_POINTS} points, got {d.n}"
            )
        lp = build_lifted(d, args.eps)
        sol = solve_sdp(build_sdp(lp), max_iters=args.iters or 100000)
        _, line, alphas = extract_rank1(sol)
        extras = {
            "alphas": [float(a) for a in alphas],
            "sdp": {
                "cost": float(sol.cost),
                "tightness_ratio": float(sol.tightness_ratio),
                "iterations": int(sol.iterations),
            },
        }
        return line, extras
    raise UsageError(f"unknown method {args.method!r}")


def cmd_fit(args) -> int:
    t0 = time.perf_counter()
    d = read_dataset_csv(args.input)
    t_parse = time.perf_counter()
    if d.n < 2:
        raise UsageError("need at least two points to fit")

    line, extras = _fit_once(args, d)
    t_fit = time.perf_counter()

    report = {
        "method": args.method,
        "line": _line_tree(line),
        "tls_cost": tls_cost(line, d),
        "gm_cost": gm_cost(line, d),
    }
    report.update(extras)

    timings = {
        "parse_ms": (t_parse - t0) * 1e3,
        "fit_ms": (t_fit - t_parse) * 1e3,
    }
    if args.certify:
        t = time.perf_counter()
        cert = certify(d, line, eps=args.eps, cfg=DRConfig(beta=args.beta))
        timings["certify_ms"] = (time.perf_counter() - t) * 1e3
        report["certificate"] = {
            "certified": bool(cert.certified),
            "min_eig_K2": float(cert.min_eig_K2),
            "iterations_used": int(cert.iterations_used),
            "subspace_residual": float(cert.subspace_residual),
        }
    if args.oracle:
        t = time.perf_counter()
        oline, ocost = grid_search(d)
        timings["oracle_ms"] = (time.perf_counter() - t) * 1e3
        report["oracle"] = {"cost": float(ocost), "line": _line_tree(oline)}

    timings["total_ms"] = (time.perf_counter() - t0) * 1e3
    if args.no_timings:
        timings = {k: 0.0 for k in timings}
    report["seed"] = args.seed
    report["timings"] = timings
    _emit(args, dumps_tree(report))
    return 0


def cmd_certify(args) -> int:
    t0 = time.perf_counter()
    d = read_dataset_csv(args.input)
    candidate = canonicalize(LineParams(*args.line))
    cert = certify(
        d,
        candidate,
        eps=args.eps,
        cfg=DRConfig(beta=args.beta, max_iters=args.iters or 300),
    )
    total_ms = (time.perf_counter() - t0) * 1e3
    report = {
        "method": "certify",
        "line": _line_tree(candidate),
        "tls_cost": tls_cost(candidate, d),
        "gm_cost": gm_cost(candidate, d),
        "certificate": {
            "certified": bool(cert.certified),
            "min_eig_K2": float(cert.min_eig_K2),
            "iterations_used": int(cert.iterations_used),
            "subspace_residual": float(cert.subspace_residual),
        },
        "seed": args.seed,
        "timings": {"total_ms": 0.0 if args.no_timings else total_ms},
    }
    if args.dump_eig_trace:
        np.savetxt(args.dump_eig_trace, np.asarray(cert.eig_trace))
    if args.dump_gamma:
        np.savetxt(args.dump_gamma, gamma_to_Gamma(cert.gamma_final, d.n))
    _emit(args, dumps_tree(report))
    return 0


def cmd_sdp_export(args) -> int:
    d = read_dataset_csv(args.input)
    if d.n > SDP_MAX_POINTS:
        raise UsageError(
            f"sdp export supports at most {SDP_MAX_POINTS} points, got {d.n}"
        )
    lp = build_lifted(d, args.eps)
    problem = build_sdp(lp, redundant=not args.plain)
    out = args.out or "problem.dat-s"
    export_sdpa(problem, out)
    print(f"wrote {problem.n_constraints} constraints (dim {problem.dim}) to {out}")
    return 0


def cmd_plot(args) -> int:
    from .plotting import render_plot

    d = read_dataset_csv(args.input)
    overlays = []
    mask = None
    if args.truth:
        tline, _, mask = read_truth_sidecar(args.truth)
        overlays.append(("truth", tline))
    for rp in args.report or []:
        with open(rp) as fh:
            tree = loads_tree(fh.read())
        overlays.append((tree["method"], _line_from_tree(tree["line"])))
        if "oracle" in tree:
            overlays.append(("oracle", _line_from_tree(tree["oracle"]["line"])))
    gamma = np.loadtxt(args.gamma) if args.gamma else None
    out = args.out or "plot.svg"
    render_plot(d, overlays, out, gamma=gamma, outlier_mask=mask)
    print(f"wrote {out}")
    return 0


def _add_common(p):
    p.add_argument("--eps", type=float, default=1e-6, help="offset prior weight")
    p.add_argument("--beta", type=float, default=1.0, help="DR step parameter")
    p.add_argument("--iters", type=int, default=None, help="iteration cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--no-timings", action="store_true",
                   help="zero out wall-clock fields (for byte-reproducible output)")


def _build_parser():
    parser = _Parser(prog="certline", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[], help="generate a synthetic scenario")
    p.add_argument("--n-total", type=int, default=10)
    p.add_argument("--n-outliers", type=int, default=4)
    p.add_argument("--sigma", type=float, default=0.05)
    p.add_argument("--box", type=float, default=5.0)
    p.add_argument("--line", type=float, nargs=3, default=[-0.5, 1.0, 1.0],
                   metavar=("A", "B", "C"))
    p.add_argument("--truth-out", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fit", help="fit a line and report costs")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=["tls", "irls", "sdp"], default="irls")
    p.add_argument("--certify", action="store_true")
    p.add_argument("--oracle", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("certify", help="certify a given line on a dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--line", type=float, nargs=3, required=True,
                   metavar=("A", "B", "C"))
    p.add_argument("--dump-eig-trace", default=None)
    p.add_argument("--dump-gamma", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sdp-export", help="write the relaxation in sparse SDPA format")
    p.add_argument("--input", required=True)
    p.add_argument("--plain", action="store_true",
                   help="export the loose relaxation without redundant constraints")
    _add_common(p)
    p.set_defaults(func=cmd_sdp_export)

    p = sub.add_parser("plot", help="render a scenario/report overlay as SVG")
    p.add_argument("--input", required=True)
    p.add_argument("--report", action="append", default=None)
    p.add_argument("--truth", default=None)
    p.add_argument("--gamma", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"certline: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"certline: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # numeric/internal failures
        print(f"certline: numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
