"""Command-line front end.

Subcommands expose the main computations and the verification suites:

    convpow amatrix 6 --check --det
    convpow qcoeff 3 12
    convpow beta 4
    convpow eval 2 1.5 --lam -0.25 --a 1
    convpow eval --conv 2 1 --lambda 0 --a 1
    convpow verify dualpath --nmax 8 --smax 40
    convpow verify all

Output is a single JSON document by default (``--format csv`` emits the
tabular part).  Exit status: 0 when every reported check passed, 1 when
any failed, 2 for usage or domain errors.  The default truncation order
can also be set through the environment variable ``CONVPOW_N``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass

from . import verify as verify_mod
from .amatrix import a_determinant, check_special_values, compare_last_rows_to_bfile, compute_a_matrix
from .convolution import (
    DEFAULT_MAX_DEPTH,
    ConvParams,
    conv_power_quadrature,
    f_from_conv,
    f_quadrature_oracle,
    reconstruct_from_f,
)
from .fdecomp import beta_table, f_eval
from .qcoeff import q_closed_form, q_via_recurrence
from .quadrature import QuadratureError
from .series import DEFAULT_ORDER, DEFAULT_PREC


@dataclass(frozen=True)
class RunConfig:
    """Validated knobs shared by all subcommands."""

    order: int = DEFAULT_ORDER
    precision: int = DEFAULT_PREC
    quad_tol: float = 1e-10
    compare_tol: float = 1e-6
    fmt: str = "json"
    bfile: str | None = None

    def __post_init__(self):
        if self.order < 8:
            raise ValueError(f"--order must be >= 8, got {self.order}")
        if self.precision < 24:
            raise ValueError(f"--prec must be >= 24 bits, got {self.precision}")
        if not self.quad_tol > 0:
            raise ValueError(f"--tol must be positive, got {self.quad_tol}")
        if not self.compare_tol > 0:
            raise ValueError(f"--compare-tol must be positive, got {self.compare_tol}")
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"--format must be json or csv, got {self.fmt!r}")


def _default_order() -> int:
    raw = os.environ.get("CONVPOW_N")
    if raw is None:
        return DEFAULT_ORDER
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"CONVPOW_N must be an integer, got {raw!r}") from None


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--order", "-N", type=int, default=None, help="series truncation order (env CONVPOW_N)")
    parser.add_argument("--prec", type=int, default=DEFAULT_PREC, help="evaluation precision in bits")
    parser.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance")
    parser.add_argument("--compare-tol", type=float, default=1e-6, help="tolerance for cross-path comparisons")
    parser.add_argument("--format", choices=("json", "csv"), default="json", help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="convpow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amatrix", help="build a triangular matrix, optionally checking its identities")
    p.add_argument("s", type=int, help="matrix size parameter")
    p.add_argument("--check", action="store_true", help="verify the closed-form slices")
    p.add_argument("--det", action="store_true", help="include the determinant")
    p.add_argument("--bfile", type=str, default=None, help="align flattened bottom rows against an OEIS-style b-file")
    _add_common(p)

    p = sub.add_parser("qcoeff", help="coefficients of one Q-series by both computation paths")
    p.add_argument("n", type=int, help="series level (>= 2 enables the closed-form path)")
    p.add_argument("smax", type=int, help="highest coefficient index")
    _add_common(p)

    p = sub.add_parser("beta", help="decomposition constants beta_0..beta_nmax")
    p.add_argument("nmax", type=int)
    _add_common(p)

    p = sub.add_parser("eval", help="evaluate f_n(y), or a convolution power with --conv, by every available path")
    p.add_argument("n", type=int)
    p.add_argument("y", type=float, help="evaluation point: y for the normal form, x when --conv is given")
    p.add_argument("--conv", action="store_true", help="evaluate the n-fold convolution power at x instead of f_n(y)")
    p.add_argument("--lam", "--lambda", dest="lam", type=float, default=0.0, help="kernel cutoff for the convolution path")
    p.add_argument("--a", dest="a", type=float, default=1.0, help="kernel shift for the convolution path")
    p.add_argument("--skip-oracles", action="store_true", help="series value only")
    _add_common(p)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", choices=sorted(verify_mod.SUITES) + ["all"])
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--smax", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--y", type=float, default=None)
    _add_common(p)

    return parser


def _config_from(args: argparse.Namespace) -> RunConfig:
    order = args.order if args.order is not None else _default_order()
    return RunConfig(
        order=order,
        precision=args.prec,
        quad_tol=args.tol,
        compare_tol=args.compare_tol,
        fmt=args.format,
        bfile=getattr(args, "bfile", None),
    )


def cmd_amatrix(args, cfg: RunConfig):
    a = compute_a_matrix(args.s)
    results: dict = {"s": a.s, "rows": [list(r) for r in a.rows]}
    checks: list[verify_mod.Check] = []
    if args.det:
        results["determinant"] = a_determinant(a)
    if args.check:
        report = check_special_values(a)
        results["special_values"] = report
        for identity, ok in report["identities"].items():
            checks.append(verify_mod.Check(f"{identity} s={a.s}", ok))
    if cfg.bfile:
        results["bfile_alignment"] = compare_last_rows_to_bfile(cfg.bfile, a.s)
    return results, checks


def cmd_qcoeff(args, cfg: RunConfig):
    if args.n < 0:
        raise ValueError(f"level must be >= 0, got {args.n}")
    if args.smax < 1:
        raise ValueError(f"smax must be >= 1, got {args.smax}")
    rec = q_via_recurrence(args.n, args.smax).series
    rows = []
    agree = True
    for s in range(args.smax + 1):
        row = {"s": s, "recurrence": str(rec.coeffs[s])}
        if args.n >= 2:
            cf = q_closed_form(args.n, s)
            row["closed_form"] = str(cf)
            row["agree"] = cf == rec.coeffs[s]
            agree = agree and row["agree"]
        rows.append(row)
    results = {"n": args.n, "coefficients": rows, "paths_agree": agree if args.n >= 2 else None}
    checks = []
    if args.n >= 2:
        checks.append(verify_mod.Check(f"dualpath n={args.n} s<={args.smax}", agree))
    return results, checks


def cmd_beta(args, cfg: RunConfig):
    if args.nmax < 0:
        raise ValueError(f"nmax must be >= 0, got {args.nmax}")
    table = beta_table(args.nmax, cfg.order, cfg.precision)
    rows = [
        {
            "n": k,
            "value": float(table.values[k]),
            "tail": float(table.tails[k]),
        }
        for k in range(len(table))
    ]
    checks = [verify_mod.Check("beta1-exact", table.values[1] == 0)] if args.nmax >= 1 else []
    return {"betas": rows}, checks


def _spread_check(results: dict, cfg: RunConfig, label: str) -> list[verify_mod.Check]:
    values = [results[k] for k in ("series", "quadrature", "reconstruction") if isinstance(results[k], float)]
    diff = max(abs(u - v) for u in values for v in values) if len(values) > 1 else 0.0
    results["max_pairwise_diff"] = diff
    if len(values) < 2:
        return []
    return [verify_mod.Check(label, diff <= cfg.compare_tol, f"max pairwise diff = {diff:.3g}")]


def cmd_eval(args, cfg: RunConfig):
    params = ConvParams(args.lam, args.a)
    if args.conv:
        # phi*n(x) three ways: transform of the exact series, direct nested
        # quadrature, transform of the iterated-integral oracle.
        n, x = args.n, args.y
        results = {
            "n": n,
            "x": x,
            "lam": params.lam,
            "a": params.a,
            "series": reconstruct_from_f(params, n, x, cfg.order, cfg.precision),
            "quadrature": None,
            "reconstruction": None,
        }
        if not args.skip_oracles:
            if n <= DEFAULT_MAX_DEPTH:
                results["quadrature"] = conv_power_quadrature(params, n, x, cfg.quad_tol)
            y = (x - n * params.lam) / (params.lam + params.a)
            oracle = f_quadrature_oracle(n - 1, y, cfg.quad_tol)
            results["reconstruction"] = math.factorial(n) / (x + n * params.a) * oracle
        return results, _spread_check(results, cfg, f"conv-paths-agree n={n} x={x}")

    if args.n < 0:
        raise ValueError(f"n must be >= 0, got {args.n}")
    if args.y < 0:
        raise ValueError(f"y must be >= 0, got {args.y}")
    r = f_eval(args.n, args.y, cfg.order, cfg.precision)
    results = {
        "n": args.n,
        "y": args.y,
        "series": float(r.value),
        "series_tail": float(r.tail_estimate),
        "tail_reliable": r.tail_reliable,
        "quadrature": None,
        "reconstruction": None,
    }
    if not args.skip_oracles:
        results["quadrature"] = f_quadrature_oracle(args.n, args.y, cfg.quad_tol)
        if args.n + 1 <= DEFAULT_MAX_DEPTH:
            results["reconstruction"] = f_from_conv(params, args.n + 1, args.y, cfg.quad_tol)
    return results, _spread_check(results, cfg, f"paths-agree n={args.n} y={args.y}")


def cmd_verify(args, cfg: RunConfig):
    kwargs: dict = {}
    if args.suite == "dualpath":
        if args.nmax is not None:
            kwargs["n_max"] = args.nmax
        if args.smax is not None:
            kwargs["s_max"] = args.smax
    elif args.suite == "specials":
        if args.smax is not None:
            kwargs["s_max"] = args.smax
    elif args.suite in ("stirling", "beta"):
        if args.nmax is not None:
            kwargs["n_max"] = args.nmax
    elif args.suite in ("reflection", "derivative"):
        if args.n is not None:
            kwargs["ns"] = (args.n,)
        if args.y is not None:
            kwargs["ys"] = (args.y,)
    elif args.suite == "elimination":
        if args.n is not None:
            kwargs["ns"] = (args.n,)
        if args.y is not None:
            kwargs["ys"] = (args.y,)
    checks = verify_mod.run_suite(args.suite, **kwargs)
    passed = sum(1 for c in checks if c.ok)
    return {"suite": args.suite, "passed": passed, "total": len(checks)}, checks


_HANDLERS = {
    "amatrix": cmd_amatrix,
    "qcoeff": cmd_qcoeff,
    "beta": cmd_beta,
    "eval": cmd_eval,
    "verify": cmd_verify,
}


def _emit_csv(results, checks, stream) -> None:
    """CSV output: the most tabular part of the results, else the checks."""
    rows = None
    if isinstance(results, dict):
        for value in results.values():
            if isinstance(value, list) and value and isinstance(value[0], dict):
                rows = value
                break
    if rows is None and checks:
        rows = [asdict(c) for c in checks]
    if rows is None:
        rows = [{"key": k, "value": v} for k, v in (results or {}).items()]
    writer = csv.DictWriter(stream, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        cfg = _config_from(args)
        results, checks = _HANDLERS[args.command](args, cfg)
    except (ValueError, QuadratureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    if cfg.fmt == "csv":
        _emit_csv(results, checks, sys.stdout)
    else:
        payload = {
            "command": args.command,
            "config": asdict(cfg),
            "results": results,
            "checks": [asdict(c) for c in checks],
            "elapsed_ms": round(elapsed_ms, 3),
        }
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0 if all(c.ok for c in checks) else 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
