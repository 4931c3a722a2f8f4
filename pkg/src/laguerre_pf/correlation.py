"""One-point function ``rho_N(x) = (1/N) w(x) sum_{k<N} p_k(x)^2`` and linear statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .numerics import NumericalError, PrecisionContext, gauss_from_jacobi, polyval
from .orthopoly import RecurrenceTable, orthonormal_functions, orthonormal_values


def _N(rec: RecurrenceTable) -> int:
    if rec.spec is None:
        raise ValueError("table has no weight attached")
    return rec.spec.N


def rho_sum(rec: RecurrenceTable, x):
    """Sum-of-squares route; needs rows ``0..N-1``."""
    N = _N(rec)
    if rec.nmax < N - 1:
        raise ValueError(f"rho_sum needs rows through {N - 1}, table has {rec.nmax}")
    q = orthonormal_functions(rec, x, N - 1)
    return rec.ctx.mp.fsum(v * v for v in q) / N


def rho_cd(rec: RecurrenceTable, x):
    """Christoffel-Darboux route; needs rows ``0..N``.

    ``rho = (b_N / N) w [p_N' p_{N-1} - p_N p_{N-1}']`` with
    ``b_N = gamma_{N-1}/gamma_N``.
    """
    N = _N(rec)
    if rec.nmax < N:
        raise ValueError(f"rho_cd needs rows through {N}, table has {rec.nmax}")
    q, r = orthonormal_functions(rec, x, N, derivatives=True)
    return rec.b[N] * (r[N] * q[N - 1] - q[N] * r[N - 1]) / N


@dataclass(frozen=True)
class LinearStatistic:
    """``theta`` with an optional polynomial degree.

    A declared ``degree`` lets :func:`expect` use an exact Gauss rule;
    otherwise nodes are doubled until the value settles.
    """

    theta: Callable
    description: str = ""
    degree: int | None = None

    @classmethod
    def polynomial(cls, coeffs: Sequence, description: str | None = None) -> "LinearStatistic":
        coeffs = tuple(coeffs)
        deg = max((k for k, c in enumerate(coeffs) if c != 0), default=0)
        desc = description or "poly(" + ",".join(str(c) for c in coeffs) + ")"
        return cls(lambda x, c=coeffs: polyval([x.context.mpf(v) if not isinstance(v, int) else v for v in c], x),
                   desc, deg)


def gauss_size(N: int, degree: int) -> int:
    """Smallest rule exact for ``theta * p_k^2`` with ``k < N`` and ``deg theta = degree``."""
    return N + max(0, math.ceil((degree - 1) / 2))


def expect(stat: LinearStatistic, rec: RecurrenceTable, ctx: PrecisionContext | None = None):
    """``int theta(x) rho_N(x) dx``."""
    N = _N(rec)
    ctx = ctx or rec.ctx
    mp = ctx.mp

    def with_rule(M):
        xs, ws = gauss_from_jacobi(rec, M, ctx)
        total = mp.zero
        for x, w in zip(xs, ws):
            p = orthonormal_values(rec, x, N - 1)
            total += w * stat.theta(x) * mp.fsum(v * v for v in p)
        return total / N

    if stat.degree is not None:
        M = gauss_size(N, stat.degree)
        if M > rec.nmax + 1:
            raise ValueError(f"degree-{stat.degree} statistic at N={N} needs {M} recurrence rows")
        return with_rule(M)
    tol = mp.mpf(10) ** (-(ctx.digits // 3))
    M = N + 1
    prev = with_rule(M)
    while 2 * M <= rec.nmax + 1:
        M *= 2
        cur = with_rule(M)
        if abs(cur - prev) <= tol * max(1, abs(cur)):
            return cur
        prev = cur
    raise NumericalError(f"node doubling did not settle within {rec.nmax + 1} recurrence rows")

