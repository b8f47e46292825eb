"""
Command-line entry point: ``quatderiv {verify, filter, lsq}``.

Primary outputs (JSON reports, CSV curves, solution files) are deterministic
for fixed flags and seed. The run manifest embedded in them omits the
wall-clock time; file outputs get a ``<name>.manifest.json`` sidecar that
includes it.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import QuatDerivError
from .ghr import DEFAULT_CONFIG
from .optimizers import (
    LsqProblem,
    lsq_gradient,
    lsq_solve,
    nlms_step,
    normal_equation_residual,
    qapa_init,
    qapa_step,
    qlms_init,
    qlms_step,
    system_id_data,
    widely_linear_data,
    wl_qlms_init,
    wl_qlms_step,
)
from .qmatrix import QMatrix, frob_norm
from .serialization import load_matrix, matrix_to_dict
from .suites import differential_checks, rule_checks
from .tables import verify_table

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
PASSING = ("pass", "flagged_typo")


def resolve_seed(seed: int | None) -> int:
    """``--seed`` if given, else ``$GHR_SEED``, else 0."""
    if seed is not None:
        return seed
    env = os.environ.get("GHR_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise QuatDerivError(f"GHR_SEED must be an integer, got {env!r}") from None


def run_manifest(args: argparse.Namespace, seed: int) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    return {"subcommand": args.command, "flags": flags, "seed": seed, "version": __version__,
            "diff_config": {"step": DEFAULT_CONFIG.step, "scheme": DEFAULT_CONFIG.scheme,
                            "rel_tol": DEFAULT_CONFIG.rel_tol, "abs_tol": DEFAULT_CONFIG.abs_tol}}


def _write_sidecar(path: Path, manifest: dict, started: float):
    side = dict(manifest, wall_clock_s=round(time.perf_counter() - started, 3))
    path.with_name(path.name + ".manifest.json").write_text(json.dumps(side, indent=2) + "\n")


def _fmt(x):
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.2e}"
    return str(x)


def _print_table(rows, out):
    print(f"{'id':<40} {'verdict':<13} {'err':>9} {'err*':>9}", file=out)
    for r in rows:
        err = r.get("err_dq", r.get("worst_err"))
        err2 = r.get("err_dqc", r.get("slope"))
        print(f"{r['id'][:40]:<40} {r['verdict']:<13} {_fmt(err):>9} {_fmt(err2):>9}", file=out)


# verify ---------------------------------------------------------------------------------


def cmd_verify(args) -> int:
    started = time.perf_counter()
    seed = resolve_seed(args.seed)
    everything = not args.tables and not args.rules and not args.differentials
    tables = args.tables or ([4, 5, 6, 7] if everything else [])
    rows = []
    for t in tables:
        rows.extend(r.to_dict() for r in verify_table(t, n_samples=args.samples, seed=seed))
    if args.rules or everything:
        rows.extend(rule_checks(seed, n_pairs=args.pairs))
    if args.differentials or everything:
        rows.extend(differential_checks(seed))
    failed = [r["id"] for r in rows if r["verdict"] not in PASSING]
    report = {"manifest": run_manifest(args, seed), "reports": rows, "failed": failed}
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        path = Path(args.out)
        path.write_text(text)
        _write_sidecar(path, report["manifest"], started)
        _print_table(rows, sys.stdout)
    else:
        sys.stdout.write(text)
        _print_table(rows, sys.stderr)
    summary = f"{len(rows) - len(failed)}/{len(rows)} checks pass"
    print(summary if not failed else f"{summary}; failing: {', '.join(failed)}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# filter ---------------------------------------------------------------------------------


def _window(xs, ds, n, S):
    Qw = QMatrix(np.concatenate([xs[n - s].data for s in range(S)], axis=1))
    d = QMatrix.column([ds[n - s] for s in range(S)])
    return Qw, d


def run_filter(variant: str, order: int, steps: int, eta: float, seed: int, window: int = 1,
               eps: float = 1e-6, output: str = "transpose", noise: float = 0.0,
               signal: str = "white") -> list[tuple[int, float, float]]:
    """Run one adaptive filter on seeded synthetic data.

    Returns ``(step, |e|, ||w - w_true||)`` rows. QLMS uses the requested
    output convention; QAPA and NLMS identify a ``y = w^H x`` system and
    WL-QLMS a widely linear one.
    """
    rng = np.random.default_rng(seed)
    curve = []
    if variant == "wlqlms":
        xs, ds, (h, g) = widely_linear_data(rng, order, steps, noise)
        zero = QMatrix.zeros(order, 1)
        truth = [h, g, zero, zero]
        st = wl_qlms_init(order, eta)
        for n, (x, d) in enumerate(zip(xs, ds)):
            wl_qlms_step(st, x, d)
            dist = np.sqrt(sum(frob_norm(w - t) ** 2 for w, t in zip(st.weights, truth)))
            curve.append((n, st.history[-1], float(dist)))
        return curve
    out_conv = output if variant == "qlms" else "hermitian"
    xs, ds, w_true = system_id_data(rng, order, steps, out_conv, noise, signal)
    if variant == "qlms":
        st = qlms_init(order, eta, output)
        for n, (x, d) in enumerate(zip(xs, ds)):
            qlms_step(st, x, d)
            curve.append((n, st.history[-1], frob_norm(st.w - w_true)))
    elif variant == "qapa":
        st = qapa_init(order, eta, window, eps)
        for n in range(window - 1, steps):
            qapa_step(st, *_window(xs, ds, n, window))
            curve.append((n, st.history[-1], frob_norm(st.w - w_true)))
    elif variant == "nlms":
        w = QMatrix.zeros(order, 1)
        for n, (x, d) in enumerate(zip(xs, ds)):
            w, e = nlms_step(w, x, d, eta, eps)
            curve.append((n, e, frob_norm(w - w_true)))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return curve


def cmd_filter(args) -> int:
    started = time.perf_counter()
    seed = resolve_seed(args.seed)
    if args.order < 1 or args.steps < 1 or args.eta <= 0:
        raise QuatDerivError("order and steps must be positive and eta > 0")
    if args.variant == "qapa" and not 1 <= args.window <= args.order:
        raise QuatDerivError(f"window must lie in [1, order={args.order}]")
    curve = run_filter(args.variant, args.order, args.steps, args.eta, seed, args.window,
                       args.eps, args.output, args.noise, args.signal)
    manifest = run_manifest(args, seed)
    if args.out:
        path = Path(args.out)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["step", "abs_e", "weight_error"])
            w.writerows((n, repr(float(e)), repr(float(d))) for n, e, d in curve)
        _write_sidecar(path, manifest, started)
    last = curve[-1]
    print(json.dumps({"manifest": manifest, "final_step": last[0], "final_abs_e": last[1],
                      "final_weight_error": last[2]}, indent=2))
    return EXIT_OK


# lsq -----------------------------------------------------------------------------------


def cmd_lsq(args) -> int:
    started = time.perf_counter()
    p = LsqProblem(load_matrix(args.A), load_matrix(args.B), load_matrix(args.C))
    Q = lsq_solve(p)
    manifest = run_manifest(args, resolve_seed(None))
    out = {"rows": Q.rows, "cols": Q.cols, "data": matrix_to_dict(Q)["data"], "manifest": manifest}
    report = {
        "objective": frob_norm(p.C - p.A @ Q @ p.B) ** 2,
        "gradient_norm": frob_norm(lsq_gradient(p, Q)),
        "normal_equation_residual": normal_equation_residual(p, Q),
    }
    if args.out:
        path = Path(args.out)
        path.write_text(json.dumps(out) + "\n")
        _write_sidecar(path, manifest, started)
    else:
        print(json.dumps(out))
    print(json.dumps(report, indent=2), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


# entry point -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quatderiv",
                                 description="GHR derivative checks and quaternion filters")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check closed-form derivatives against the oracle")
    v.add_argument("--tables", type=int, nargs="+", choices=[4, 5, 6, 7])
    v.add_argument("--rules", action="store_true", help="product and chain rule checks")
    v.add_argument("--differentials", action="store_true", help="closed-form differentials")
    v.add_argument("--seed", type=int)
    v.add_argument("--samples", type=int, default=25, help="random points per table row")
    v.add_argument("--pairs", type=int, default=50, help="random map pairs per rule")
    v.add_argument("--out", help="write the JSON report here instead of stdout")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("filter", help="run an adaptive filter on synthetic data")
    f.add_argument("--variant", choices=["qlms", "wlqlms", "qapa", "nlms"], default="qlms")
    f.add_argument("--order", type=int, default=4)
    f.add_argument("--steps", type=int, default=5000)
    f.add_argument("--eta", type=float, default=0.05)
    f.add_argument("--window", type=int, default=2)
    f.add_argument("--eps", type=float, default=1e-6)
    f.add_argument("--output", choices=["transpose", "hermitian"], default="transpose",
                   help="QLMS output convention: w^T x or w^H x")
    f.add_argument("--noise", type=float, default=0.0)
    f.add_argument("--signal", choices=["white", "ar1"], default="white")
    f.add_argument("--seed", type=int)
    f.add_argument("--out", help="CSV learning curve")
    f.set_defaults(func=cmd_filter)

    q = sub.add_parser("lsq", help="solve min ||C - A Q B|| from JSON or CSV matrices")
    q.add_argument("--A", required=True)
    q.add_argument("--B", required=True)
    q.add_argument("--C", required=True)
    q.add_argument("--out", help="write Q here instead of stdout")
    q.set_defaults(func=cmd_lsq)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (QuatDerivError, ValueError, OSError) as exc:
        print(f"quatderiv {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
