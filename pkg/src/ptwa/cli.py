"""Command-line front end for the alignment-model toolkit.

Subcommands expose each pipeline stage with reproducible configuration:

* ``gci``       -- solve the generalized collisional invariant and dump its
                   coefficients plus a grid reconstruction.
* ``residual``  -- sweep (lambda, alpha) and report the finite-difference
                   residual of the reconstructed invariant.
* ``coeffs``    -- sweep alpha at fixed lambda and tabulate the macroscopic
                   coefficients c1, c2, d with their ingredient moments.
* ``simulate``  -- run the interacting-particle scheme from a JSON config and
                   dump summary statistics (and optionally trajectories).

Every subcommand is deterministic given its flags and seed, and every CSV
starts with a ``#`` comment line recording the full configuration.  Exit
codes: 0 success, 1 usage/config error, 2 numerical failure.  Set
``PTWA_NUM_THREADS`` to cap the BLAS thread pool (applied at import, before
the numerical libraries start their threads).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

if "PTWA_NUM_THREADS" in os.environ:  # must precede the first numpy import
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, os.environ["PTWA_NUM_THREADS"])

import numpy as np

from .equilibrium import ModelParams, c1_coefficient
from .grid import Grid2D, residual_inf
from .hydro import gamma_moments
from .montecarlo import OracleConfig, mc_c2
from .particles import SimConfig, run_simulation
from .spectral import CoeffMatrix, SpectralParams, psi_on_grid, solve_gci

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with code 1 (argparse default is 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _value_list(text: str) -> list[float]:
    """Parse '0.5,1,2' or 'start:stop:step' into an ordered list of values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0.0:
            raise argparse.ArgumentTypeError(f"range step must be positive, got {step}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = [start + i * step for i in range(count)]
    else:
        values = [float(p) for p in text.split(",") if p]
    if not values:
        raise argparse.ArgumentTypeError(f"empty value list: {text!r}")
    if any(v <= 0.0 for v in values):
        raise argparse.ArgumentTypeError(f"all values must be positive: {text!r}")
    return values


def _residual_grid(delta: float) -> Grid2D:
    """[-pi, pi) x [-5, 5] with spacing as close to delta as the topology allows."""
    n_theta = max(8, int(round(2.0 * math.pi / delta)))
    n_kappa = max(8, int(round(10.0 / delta)) + 1)
    return Grid2D(n_theta=n_theta, kappa_min=-5.0, kappa_max=5.0, n_kappa=n_kappa)


def _write_csv(path: str, config: dict, header: str, rows: list[list[float]]) -> None:
    """CSV with a config comment line, a header row, and repr-exact floats."""
    items = ",".join(f"{k}={v}" for k, v in sorted(config.items()))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# config: {items}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_format(v) for v in row) + "\n")


def _format(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _solve(lam: float, alpha: float, m: int, n: int) -> tuple[CoeffMatrix, SpectralParams]:
    sp = SpectralParams(m=m, n=n, model=ModelParams(lam=lam, alpha=alpha))
    return solve_gci(sp), sp


def cmd_gci(args) -> int:
    x, sp = _solve(args.lam, args.alpha, args.m, args.n)
    config = {"lambda": args.lam, "alpha": args.alpha, "m": args.m, "n": args.n}
    items = ",".join(f"{k}={v}" for k, v in sorted(config.items()))
    coeff_path = f"{args.out}_coeffs.csv"
    psi_path = f"{args.out}_psi.csv"
    with open(coeff_path, "w", encoding="utf-8") as fh:
        fh.write(f"# config: {items}\n")
        x.to_csv(fh)
    field = psi_on_grid(x, sp, _residual_grid(args.delta))
    with open(psi_path, "w", encoding="utf-8") as fh:
        fh.write(f"# config: {items},delta={args.delta}\n")
        field.to_csv(fh)
    print(f"algebraic residual: {x.residual:.6e}")
    print(f"condition estimate: {1.0 / x.rcond if x.rcond > 0 else math.inf:.6e}")
    print(f"wrote {coeff_path} and {psi_path}")
    return EXIT_OK


def cmd_residual(args) -> int:
    grid = _residual_grid(args.delta)
    rows = []
    for lam in args.lam:
        for alpha in args.alpha:
            x, sp = _solve(lam, alpha, args.m, args.n)
            rows.append([lam, alpha, residual_inf(psi_on_grid(x, sp, grid), sp.model)])
    config = {
        "lambda": ",".join(str(v) for v in args.lam),
        "alpha": ",".join(str(v) for v in args.alpha),
        "m": args.m,
        "n": args.n,
        "delta": args.delta,
    }
    _write_csv(args.out, config, "lambda,alpha,residual_inf", rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    if args.check:
        table = {(r[0], r[1]): r[2] for r in rows}
        ok = True
        for lam in args.lam:
            line = [table[(lam, a)] for a in args.alpha]
            if not all(a < b for a, b in zip(line, line[1:])):
                print(f"check failed: residual not increasing in alpha at lambda={lam}")
                ok = False
        for alpha in args.alpha:
            line = [table[(lam, alpha)] for lam in args.lam]
            if not all(a > b for a, b in zip(line, line[1:])):
                print(f"check failed: residual not decreasing in lambda at alpha={alpha}")
                ok = False
        if not ok:
            return EXIT_NUMERICAL
        print("check passed: residual increases with alpha and decreases with lambda")
    return EXIT_OK


def cmd_coeffs(args) -> int:
    rows = []
    mc_cfg = None
    if args.mc_check:
        mc_cfg = OracleConfig(
            model=ModelParams(lam=args.lam, alpha=args.alpha[0]),
            dt=args.mc_dt,
            t_final=args.mc_tfinal,
            paths=args.mc_paths,
            seed=args.seed,
        )
    for alpha in args.alpha:
        model = ModelParams(lam=args.lam, alpha=alpha)
        row = [args.lam, alpha, c1_coefficient(model)]
        try:
            x, sp = _solve(args.lam, alpha, args.m, args.n)
            g = gamma_moments(x, sp)
            row += [g["gamma2"] / g["gamma1"], g["gamma1"], g["gamma2"], model.kappa_variance]
        except (RuntimeError, ArithmeticError) as exc:
            print(f"alpha={alpha}: degenerate point ({exc}); emitting NaN", file=sys.stderr)
            row += [math.nan, math.nan, math.nan, model.kappa_variance]
        if args.mc_check:
            try:
                mc = mc_c2(
                    OracleConfig(
                        model=model,
                        dt=mc_cfg.dt,
                        t_final=mc_cfg.t_final,
                        paths=mc_cfg.paths,
                        seed=mc_cfg.seed,
                    ),
                    n_grid_theta=args.mc_grid,
                    n_grid_kappa=args.mc_grid,
                )
                row += [mc.c2, mc.std_error]
            except (RuntimeError, ArithmeticError) as exc:
                print(f"alpha={alpha}: MC check failed ({exc}); emitting NaN", file=sys.stderr)
                row += [math.nan, math.nan]
        rows.append(row)
    header = "lambda,alpha,c1,c2,gamma1,gamma2,d"
    if args.mc_check:
        header += ",mc_c2,mc_stderr"
    config = {
        "lambda": args.lam,
        "alpha": ",".join(str(v) for v in args.alpha),
        "m": args.m,
        "n": args.n,
        "mc_check": args.mc_check,
        "seed": args.seed,
    }
    _write_csv(args.out, config, header, rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read config {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    required = {"n_agents", "box", "radius", "lambda", "alpha", "dt", "t_final", "seed"}
    missing = required - raw.keys()
    if missing:
        print(f"config missing fields: {sorted(missing)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = SimConfig(
            n_agents=int(raw["n_agents"]),
            box_size=float(raw["box"]),
            radius=float(raw["radius"]),
            model=ModelParams(lam=float(raw["lambda"]), alpha=float(raw["alpha"])),
            dt=float(raw["dt"]),
            seed=int(raw["seed"]),
            include_self=bool(raw.get("include_self", True)),
        )
        t_final = float(raw["t_final"])
        stride = int(raw.get("stride", 100))
        if t_final <= 0.0 or stride < 1:
            raise ValueError("t_final must be positive and stride >= 1")
    except (ValueError, TypeError) as exc:
        print(f"bad config: {exc}", file=sys.stderr)
        return EXIT_USAGE

    traj_rows = []

    def dump(step_index, t, agents):
        if args.traj and (step_index + 1) % stride == 0:
            for i in range(len(agents)):
                traj_rows.append(
                    [t, i, agents.x[i, 0], agents.x[i, 1], agents.theta[i], agents.kappa[i]]
                )

    agents, history = run_simulation(cfg, t_final, stats_every=stride, callback=dump)
    config = dict(raw)
    stats_rows = [
        [t, s.order_parameter, s.mean_direction, s.curvature_variance] for t, s in history
    ]
    _write_csv(args.out, config, "t,order_parameter,mean_direction,curvature_variance", stats_rows)
    print(f"wrote {args.out} ({len(stats_rows)} rows)")
    if args.traj:
        _write_csv(args.traj, config, "t,agent_id,x1,x2,theta,kappa", traj_rows)
        print(f"wrote {args.traj} ({len(traj_rows)} rows)")
    final = history[-1][1]
    c1 = c1_coefficient(cfg.model)
    print(f"final order parameter: {final.order_parameter:.6f} (equilibrium c1 = {c1:.6f})")
    print(
        f"final curvature variance: {final.curvature_variance:.6f} "
        f"(equilibrium alpha^2/lambda = {cfg.model.kappa_variance:.6f})"
    )
    return EXIT_OK


def _add_model_flags(parser, m_default: int, n_default: int) -> None:
    parser.add_argument("--lambda", dest="lam", type=_positive, default=1.0,
                        help="relaxation rate (positive)")
    parser.add_argument("--alpha", type=_positive, default=1.0,
                        help="noise intensity (positive)")
    parser.add_argument("-m", type=_positive_int, default=m_default,
                        help="Fourier half-width of the truncation")
    parser.add_argument("-n", type=_positive_int, default=n_default,
                        help="Hermite degree of the truncation")


def build_parser() -> _Parser:
    parser = _Parser(prog="ptwa", description=__doc__.split("\n", 1)[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gci", help="solve the generalized collisional invariant")
    _add_model_flags(p, 30, 61)
    p.add_argument("--delta", type=_positive, default=0.2, help="grid spacing for the psi dump")
    p.add_argument("--out", default="gci", help="output prefix (<out>_coeffs.csv, <out>_psi.csv)")
    p.set_defaults(func=cmd_gci)

    p = sub.add_parser("residual", help="finite-difference residual sweep over (lambda, alpha)")
    p.add_argument("--lambda", dest="lam", type=_value_list, default=[0.5, 1.0, 2.0],
                   help="comma list or start:stop:step range of lambda values")
    p.add_argument("--alpha", type=_value_list, default=[0.5, 1.0, 2.0],
                   help="comma list or start:stop:step range of alpha values")
    p.add_argument("-m", type=_positive_int, default=30)
    p.add_argument("-n", type=_positive_int, default=61)
    p.add_argument("--delta", type=_positive, default=0.2, help="finite-difference spacing")
    p.add_argument("--check", action="store_true",
                   help="exit 2 unless the residual increases with alpha and decreases with lambda")
    p.add_argument("--out", default="residual.csv")
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("coeffs", help="macroscopic coefficients over an alpha sweep")
    p.add_argument("--lambda", dest="lam", type=_positive, default=1.0)
    p.add_argument("--alpha-range", dest="alpha", type=_value_list, required=True,
                   help="start:stop:step range (or comma list) of alpha values")
    p.add_argument("-m", type=_positive_int, default=30)
    p.add_argument("-n", type=_positive_int, default=61)
    p.add_argument("--mc-check", action="store_true",
                   help="append Monte-Carlo c2 and its standard error to each row")
    p.add_argument("--mc-paths", type=_positive_int, default=20000)
    p.add_argument("--mc-dt", type=_positive, default=5e-3)
    p.add_argument("--mc-tfinal", type=_positive, default=40.0)
    p.add_argument("--mc-grid", type=_positive_int, default=16,
                   help="quadrature nodes per axis for the Monte-Carlo moments")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="coeffs.csv")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("simulate", help="run the interacting-particle scheme")
    p.add_argument("--config", required=True, help="JSON file with the simulation parameters")
    p.add_argument("--out", default="sim_stats.csv", help="summary-statistics CSV path")
    p.add_argument("--traj", default=None, help="optional trajectory CSV path")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (RuntimeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
