"""Finite-N log partition functions: gamma-product and Hankel routes."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .numerics import NumericalError, PrecisionContext, auto_context, log_factorial
from .orthopoly import WeightSpec, moments, recurrence_from_moments, stieltjes_recurrence
from .potential import Potential


class PrecisionFailure(NumericalError):
    def __init__(self, message: str, N: int | None = None, digits: int | None = None):
        hint = f"; retry with --digits {digits + 50}" if digits else ""
        super().__init__(message + hint)
        self.N = N


def log_partition(p: Potential, N: int, ctx: PrecisionContext | None = None):
    """``(log_Z_gamma, log_Z_hankel)`` for ``Z_N = N! prod_{k<N} gamma_k^-2``.

    The gamma route uses the Stieltjes table; the Hankel route the pivots of
    the moment matrix.  Neither shares nodes with the other.
    """
    ctx = ctx or PrecisionContext()
    spec = WeightSpec(p, N)
    lf = log_factorial(N, ctx)
    try:
        if N == 1:
            # Stieltjes needs nmax >= 1; rows beyond N-1 do not enter Z_N
            st = stieltjes_recurrence(spec, 1, ctx)
        else:
            st = stieltjes_recurrence(spec, N - 1, ctx)
        hk = recurrence_from_moments(moments(spec, 2 * N, ctx), ctx, spec=spec, nmax=N - 1)
    except NumericalError as exc:
        raise PrecisionFailure(f"N={N}: {exc}", N, ctx.digits) from exc
    log_gamma = lf - 2 * ctx.mp.fsum(st.log_gamma[:N])
    log_hankel = lf + hk.log_hankel(N)
    return log_gamma, log_hankel


def log_partition_laguerre(N: int, alpha, ctx: PrecisionContext | None = None):
    """``log Z_N`` at ``t = 0``: ``-N(N+alpha) log N + sum_j [lgamma(j+1) + lgamma(j+alpha)]``."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    a = ctx.mpf(alpha)
    if not a > -1:
        raise ValueError("alpha must exceed -1")
    s = mp.fsum(mp.loggamma(j + 1) + mp.loggamma(j + a) for j in range(1, N + 1))
    return -N * (N + a) * mp.log(N) + s


@dataclass(frozen=True)
class PartitionRow:
    N: int
    log_Z_gamma: object
    log_Z_hankel: object
    log_Z0: object
    log_ratio: object
    agreement: object
    digits: int


@dataclass
class PartitionTable:
    potential: Potential
    rows: list = field(default_factory=list)

    def by_N(self) -> dict:
        return {r.N: r for r in self.rows}

    def samples(self) -> list:
        return [(r.N, r.log_ratio) for r in self.rows]

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["N", "digits", "log_Z_gamma", "log_Z_hankel", "log_Z0", "log_ratio", "agreement"])
        for r in self.rows:
            mp = r.log_Z_gamma.context
            d = r.digits
            w.writerow([r.N, d, mp.nstr(r.log_Z_gamma, d), mp.nstr(r.log_Z_hankel, d),
                        mp.nstr(r.log_Z0, d), mp.nstr(r.log_ratio, d), mp.nstr(r.agreement, 5)])
        return out.getvalue()


def partition_row(p: Potential, N: int, ctx: PrecisionContext | None = None, *, auto: bool = True) -> PartitionRow:
    ctx = auto_context(N, ctx) if auto else (ctx or PrecisionContext())
    mp = ctx.mp
    lg, lh = log_partition(p, N, ctx)
    agreement = abs(lg - lh)
    tol = mp.mpf(10) ** (-mp.mpf(ctx.digits) / 3)
    if agreement > tol:
        raise PrecisionFailure(
            f"N={N}: gamma and Hankel routes differ by {mp.nstr(agreement, 5)} > {mp.nstr(tol, 3)}",
            N, ctx.digits,
        )
    l0 = log_partition_laguerre(N, p.alpha, ctx)
    return PartitionRow(N, lg, lh, l0, lg - l0, agreement, ctx.digits)


def log_ratio_sweep(p: Potential, Ns, ctx: PrecisionContext | None = None, *, auto: bool = True,
                    workers: int = 1) -> PartitionTable:
    """``log(Z_N(t)/Z_N(0))`` for each N, both routes validated.

    With ``auto`` the digits are raised per N to the Hankel-conditioning
    estimate.  ``workers > 1`` computes rows in a process pool.
    """
    Ns = list(Ns)
    if len(set(Ns)) != len(Ns):
        raise ValueError("N list has duplicates")
    if workers > 1 and len(Ns) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            packed = list(pool.map(_row_job, [(p, N, ctx, auto) for N in Ns]))
        rows = [_unpack(r) for r in packed]
    else:
        rows = [partition_row(p, N, ctx, auto=auto) for N in Ns]
    return PartitionTable(p, rows)


# context-bound mpf types do not pickle; rows cross process boundaries as strings
_FIELDS = ("log_Z_gamma", "log_Z_hankel", "log_Z0", "log_ratio", "agreement")


def _row_job(args):
    p, N, ctx, auto = args
    r = partition_row(p, N, ctx, auto=auto)
    mp = r.log_Z_gamma.context
    return r.N, r.digits, [mp.nstr(getattr(r, k), mp.dps) for k in _FIELDS]


def _unpack(packed) -> PartitionRow:
    N, digits, vals = packed
    mp = PrecisionContext(digits).mp
    return PartitionRow(N, *[mp.mpf(v) for v in vals], digits)
