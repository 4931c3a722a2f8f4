"""Command-line front end.

Subcommands ``equilibrium``, ``partition``, ``density``, ``fit`` and
``expect`` share ``--potential``, ``--digits``, ``--n-list`` and ``--out``.
Exit status: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .asymptotics import e0_energy, e0_path_oracle, fit_expansion
from .correlation import LinearStatistic, expect, gauss_size, rho_cd
from .equilibrium import endpoint_residual, solve_equilibrium
from .kernels import EdgeMaps, hard_edge_density, soft_edge_density
from .numerics import NumericalError, PrecisionContext, auto_context
from .orthopoly import WeightSpec, recurrence_table
from .partition import log_ratio_sweep
from .potential import ConfigError, Potential, parse_potential

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
DEFAULT_NS = (8, 12, 16, 24, 32, 48)


@dataclass(frozen=True)
class GridSpec:
    lo: Fraction | None = None
    hi: Fraction | None = None
    points: int = 401
    spacing: str = "sq"

    @classmethod
    def parse(cls, text: str | None) -> "GridSpec":
        """``min:max:points[:lin|sq]``; empty min/max take command defaults."""
        if not text:
            return cls()
        parts = text.split(":")
        if not 3 <= len(parts) <= 4:
            raise ConfigError(f"grid must be min:max:points[:lin|sq], got {text!r}")
        try:
            lo = Fraction(parts[0]) if parts[0] else None
            hi = Fraction(parts[1]) if parts[1] else None
            pts = int(parts[2])
        except ValueError:
            raise ConfigError(f"cannot parse grid {text!r}") from None
        spacing = parts[3] if len(parts) == 4 else "sq"
        if spacing not in ("lin", "sq"):
            raise ConfigError(f"grid spacing must be 'lin' or 'sq', got {spacing!r}")
        if pts < 2:
            raise ConfigError("grid needs at least 2 points")
        if lo is not None and hi is not None and not lo < hi:
            raise ConfigError("grid min must be below max")
        return cls(lo, hi, pts, spacing)

    def nodes(self, lo, hi, ctx: PrecisionContext):
        """Grid on [lo, hi]; ``sq`` clusters points quadratically toward ``lo``."""
        lo = ctx.mpf(self.lo) if self.lo is not None else lo
        hi = ctx.mpf(self.hi) if self.hi is not None else hi
        n = self.points - 1
        if self.spacing == "lin":
            return [lo + (hi - lo) * i / n for i in range(n + 1)]
        return [lo + (hi - lo) * (ctx.mpf(i) / n) ** 2 for i in range(n + 1)]


@dataclass(frozen=True)
class RunConfig:
    command: str
    potential: Potential
    digits: int = 40
    n_list: tuple = DEFAULT_NS
    grid: GridSpec = field(default_factory=GridSpec)
    out: Path = Path(".")
    workers: int = 1
    basis: tuple | None = None
    theta: tuple = (0, 1)
    oracle: bool = True

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.digits)


def _fmt(ctx: PrecisionContext, v) -> str:
    return ctx.mp.nstr(v, ctx.digits)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _csv(header, rows) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return out.getvalue()


def _kv(pairs) -> str:
    return "".join(f"{k}={v}\n" for k, v in pairs)


# --------------------------------------------------------------------------
# subcommands


def cmd_equilibrium(cfg: RunConfig) -> list[Path]:
    ctx = cfg.ctx
    eq = solve_equilibrium(cfg.potential, ctx)
    rec = eq.record()
    res = endpoint_residual(cfg.potential, eq.beta, ctx, method="quad")
    report = [("potential", cfg.potential.describe()), ("digits", ctx.digits)]
    report += list(rec.items())
    report.append(("endpoint_residual", ctx.mp.nstr(res, 5)))
    xs = cfg.grid.nodes(ctx.mp.zero, eq.beta, ctx)
    rows = [(_fmt(ctx, x), _fmt(ctx, eq.psi(x))) for x in xs]
    paths = [cfg.out / "equilibrium.txt", cfg.out / "density.csv"]
    _write(paths[0], _kv(report))
    _write(paths[1], _csv(["x", "psi_V"], rows))
    return paths


def cmd_partition(cfg: RunConfig) -> list[Path]:
    table = log_ratio_sweep(cfg.potential, cfg.n_list, cfg.ctx, workers=cfg.workers)
    path = cfg.out / "partition.csv"
    _write(path, table.to_csv())
    return [path]


def cmd_density(cfg: RunConfig) -> list[Path]:
    ctx = cfg.ctx
    mp = ctx.mp
    eq = solve_equilibrium(cfg.potential, ctx)
    kernels = cfg.potential.alpha == 0
    paths = []
    for N in cfg.n_list:
        wctx = auto_context(N, ctx)
        rec = recurrence_table(WeightSpec(cfg.potential, N), N, wctx)
        maps = EdgeMaps(eq, N) if kernels else None
        rows = []
        for x in cfg.grid.nodes(mp.zero, eq.beta + 2, ctx):
            hard = soft = ""
            if maps is not None and 0 < x <= maps.hard_cutoff * eq.beta:
                hard = _fmt(ctx, hard_edge_density(maps, x))
            if maps is not None and abs(x - eq.beta) <= maps.soft_window * eq.beta:
                soft = _fmt(ctx, soft_edge_density(maps, x))
            if x == 0 and cfg.potential.alpha < 0:
                exact = ""
            else:
                exact = _fmt(ctx, rho_cd(rec, wctx.mpf(x)))
            rows.append((_fmt(ctx, x), exact, hard, soft, _fmt(ctx, eq.psi(x))))
        path = cfg.out / f"density_N{N}.csv"
        _write(path, _csv(["x", "rho_exact", "hard_edge_approx", "soft_edge_approx", "psi_V"], rows))
        paths.append(path)
    return paths


def _remainder_lines(fit, samples, drop, ctx):
    Ns = {N for N, _ in samples}
    pairs = [(N, 2 * N) for N in sorted(Ns) if 2 * N in Ns]
    ratios = fit.remainder_ratios(samples, pairs, drop=drop)
    return [(f"remainder_ratio_{a}_{b}", ctx.mp.nstr(v, 8)) for (a, b), v in ratios.items()]


def cmd_fit(cfg: RunConfig) -> list[Path]:
    ctx = cfg.ctx
    mp = ctx.mp
    table = log_ratio_sweep(cfg.potential, cfg.n_list, ctx, workers=cfg.workers)
    samples = [(r.N, ctx.mpf(r.log_ratio)) for r in table.rows]
    basis = list(cfg.basis or (2, 0, -2, -4))
    fit = fit_expansion(samples, basis, ctx)
    report = [("potential", cfg.potential.describe()), ("digits", ctx.digits),
              ("n_list", ",".join(str(N) for N in cfg.n_list))]
    report += [tuple(line.split("=", 1)) for line in fit.report().splitlines()]
    report += _remainder_lines(fit, samples, (2, 0), ctx)
    if cfg.oracle and 2 in basis:
        e0 = e0_path_oracle(cfg.potential, ctx)
        e0e = e0_energy(cfg.potential, ctx)
        lead = fit.coefficient(2)
        rel = abs(lead - e0) / abs(e0) if e0 != 0 else abs(lead)
        report += [("e0_path_oracle", _fmt(ctx, e0)), ("e0_energy", _fmt(ctx, e0e)),
                   ("e0_fit_relative_error", mp.nstr(rel, 5))]
    paths = [cfg.out / "fit_report.txt", cfg.out / "fit_residuals.csv", cfg.out / "partition.csv"]
    _write(paths[0], _kv(report))
    _write(paths[1], fit.residuals_csv())
    _write(paths[2], table.to_csv())
    return paths


def cmd_expect(cfg: RunConfig) -> list[Path]:
    ctx = cfg.ctx
    mp = ctx.mp
    stat = LinearStatistic.polynomial(cfg.theta)
    rows, samples = [], []
    for N in cfg.n_list:
        M = gauss_size(N, stat.degree)
        wctx = auto_context(M, ctx)
        rec = recurrence_table(WeightSpec(cfg.potential, N), M - 1, wctx)
        v = ctx.mpf(expect(stat, rec))
        samples.append((N, v))
        rows.append((N, wctx.digits, _fmt(ctx, v)))
    paths = [cfg.out / "expect.csv"]
    _write(paths[0], _csv(["N", "digits", "value"], rows))
    eq = solve_equilibrium(cfg.potential, ctx)
    limit = mp.fsum(ctx.mpf(c) * eq.moment(l) for l, c in enumerate(cfg.theta) if c)
    report = [("potential", cfg.potential.describe()), ("theta", stat.description),
              ("equilibrium_limit", _fmt(ctx, limit))]
    basis = list(cfg.basis or (0, -2, -4, -6))
    if len(samples) >= len(basis):
        fit = fit_expansion(samples, basis, ctx, odd_power=-1)
        report += [tuple(line.split("=", 1)) for line in fit.report().splitlines()]
        if 0 in basis:
            report.append(("leading_minus_limit", mp.nstr(fit.coefficient(0) - limit, 5)))
        report += _remainder_lines(fit, samples, (0,), ctx)
    else:
        report.append(("fit", f"skipped ({len(samples)} samples for {len(basis)} basis terms)"))
    paths.append(cfg.out / "expect_fit.txt")
    _write(paths[1], _kv(report))
    return paths


COMMANDS = {
    "equilibrium": cmd_equilibrium,
    "partition": cmd_partition,
    "density": cmd_density,
    "fit": cmd_fit,
    "expect": cmd_expect,
}


# --------------------------------------------------------------------------
# argument handling


def _int_list(text: str) -> tuple:
    try:
        vals = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise ConfigError("empty integer list")
    return vals


def _load_potential(text: str) -> Potential:
    if os.path.isfile(text):
        with open(text) as fh:
            return parse_potential(fh.read())
    if "=" not in text:
        raise ConfigError(f"{text!r} is neither a file nor an inline key=value potential")
    return parse_potential(text)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--potential", default="nu=0",
                        help="inline 'nu=2 t=0,0.1 alpha=0' or a file with key=value lines")
    shared.add_argument("--digits", type=int, default=40, help="working decimal digits (>= 30)")
    shared.add_argument("--n-list", default=None, help="comma-separated N values")
    shared.add_argument("--out", default=".", help="output directory")
    shared.add_argument("--grid", default=None, help="min:max:points[:lin|sq] for x grids")
    shared.add_argument("--workers", type=int, default=1, help="processes for per-N work")

    p = argparse.ArgumentParser(prog="laguerre-pf", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("equilibrium", parents=[shared], help="equilibrium record and density grid")
    sub.add_parser("partition", parents=[shared], help="log Z_N table over the N list")
    sub.add_parser("density", parents=[shared], help="rho_N grids with edge approximations")
    f = sub.add_parser("fit", parents=[shared], help="expansion fit of log(Z_N(t)/Z_N(0))")
    f.add_argument("--basis", default=None, help="powers of N, default 2,0,-2,-4")
    f.add_argument("--no-oracle", action="store_true", help="skip the e0 oracles")
    e = sub.add_parser("expect", parents=[shared], help="linear statistic sweep and fit")
    e.add_argument("--theta", default="0,1", help="polynomial coefficients of theta, increasing degree")
    e.add_argument("--basis", default=None, help="powers of N, default 0,-2,-4,-6")
    return p


def config_from_args(args) -> RunConfig:
    potential = _load_potential(args.potential)
    if args.digits < 30:
        raise ConfigError("--digits must be at least 30")
    n_list = _int_list(args.n_list) if args.n_list else DEFAULT_NS
    if any(N < 1 for N in n_list) or len(set(n_list)) != len(n_list):
        raise ConfigError("--n-list needs distinct positive integers")
    basis = _int_list(args.basis) if getattr(args, "basis", None) else None
    theta = (0, 1)
    if getattr(args, "theta", None):
        try:
            theta = tuple(Fraction(v) for v in args.theta.split(","))
        except ValueError:
            raise ConfigError(f"cannot parse --theta {args.theta!r}") from None
        theta = tuple(int(v) if v.denominator == 1 else v for v in theta)
    return RunConfig(
        command=args.command, potential=potential, digits=args.digits, n_list=n_list,
        grid=GridSpec.parse(args.grid), out=Path(args.out), workers=max(1, args.workers),
        basis=basis, theta=theta, oracle=not getattr(args, "no_oracle", False),
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        paths = COMMANDS[cfg.command](cfg)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for path in paths:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
