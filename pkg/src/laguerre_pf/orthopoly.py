"""Orthogonal polynomials for the weight ``x^alpha exp(-N V_t(x))`` on (0, inf).

Two independent routes build the same :class:`RecurrenceTable`: an LDL^T
factorization of the Hankel moment matrix, and a discretized Stieltjes
procedure on a separately mapped DE rule.  Conventions for the orthonormal
polynomials ``p_n = gamma_n x^n + ...``::

    x p_n = b_{n+1} p_{n+1} + a_n p_n + b_n p_{n-1}
"""

from __future__ import annotations

import csv
import io
import threading
from dataclasses import dataclass, field

from .numerics import NumericalError, PrecisionContext, quad_semiinfinite
from .potential import Potential, eval_potential


@dataclass(frozen=True)
class WeightSpec:
    potential: Potential
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")

    @property
    def alpha(self):
        return self.potential.alpha

    def log_weight(self, x, ctx: PrecisionContext):
        v = -self.N * eval_potential(self.potential, x)
        if self.alpha != 0:
            v += ctx.mpf(self.alpha) * ctx.mp.log(x)  # -inf at x = 0 when alpha > 0
        return v

    def weight(self, x, ctx: PrecisionContext):
        return ctx.mp.exp(self.log_weight(x, ctx))

    def decay_hint(self):
        t1 = self.potential.t[0] if self.potential.t else 0
        return self.N * max(float(1 + t1), 0.25)


@dataclass(frozen=True)
class RecurrenceTable:
    """Recurrence rows ``0..nmax``.

    ``b[0]`` is an unused placeholder (0) so that ``b[n]`` couples ``n-1`` and
    ``n``.  ``norm2[n]`` is the squared norm of the monic polynomial of degree
    n, ``gamma[n] = norm2[n]**-1/2`` and ``log_gamma`` its log.
    """

    spec: WeightSpec | None
    nmax: int
    a: tuple
    b: tuple
    norm2: tuple
    gamma: tuple
    log_gamma: tuple
    ctx: PrecisionContext = field(repr=False, compare=False)
    route: str = "moments"

    def __post_init__(self):
        for name in ("a", "b", "norm2", "gamma", "log_gamma"):
            if len(getattr(self, name)) != self.nmax + 1:
                raise ValueError(f"{name} must have nmax+1 = {self.nmax + 1} entries")
        if any(not v > 0 for v in self.norm2):
            raise NumericalError("non-positive norm in recurrence table")
        if any(not v > 0 for v in self.b[1:]):
            raise NumericalError("non-positive off-diagonal coefficient in recurrence table")

    def log_hankel(self, n: int):
        """log of the n x n Hankel determinant, ``sum_{k<n} log norm2_k``."""
        if not 0 <= n <= self.nmax + 1:
            raise ValueError(f"need 0 <= n <= {self.nmax + 1}")
        return -2 * sum(self.log_gamma[:n], self.ctx.mp.zero)

    def to_csv(self) -> str:
        mp, d = self.ctx.mp, self.ctx.digits
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "a", "b", "log_gamma"])
        for n in range(self.nmax + 1):
            w.writerow([n, mp.nstr(self.a[n], d), mp.nstr(self.b[n], d), mp.nstr(self.log_gamma[n], d)])
        return out.getvalue()


# --------------------------------------------------------------------------
# moments

_MOMENT_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def clear_moment_cache():
    with _CACHE_LOCK:
        _MOMENT_CACHE.clear()


def moments(spec: WeightSpec, count: int, ctx: PrecisionContext | None = None) -> list:
    """``mu_k = int_0^inf x^(k+alpha) exp(-N V(x)) dx`` for ``k < count``.

    Closed form at t = 0; otherwise one vector DE quadrature converged
    component-wise in relative terms.  Results are cached per
    ``(spec, digits)``; a longer cached vector serves shorter requests.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    ctx = ctx or PrecisionContext()
    key = (spec, ctx.digits, ctx.quad_target)
    with _CACHE_LOCK:
        hit = _MOMENT_CACHE.get(key)
    if hit is not None and len(hit) >= count:
        return list(hit[:count])
    mp = ctx.mp
    alpha = ctx.mpf(spec.alpha)
    if spec.potential.is_undeformed:
        N = ctx.mpf(spec.N)
        vals = [mp.gamma(k + alpha + 1) / N ** (k + alpha + 1) for k in range(count)]
    else:
        vals = _quad_moments(spec, count, ctx, spec.decay_hint())
    with _CACHE_LOCK:
        old = _MOMENT_CACHE.get(key)
        if old is None or len(old) < count:
            _MOMENT_CACHE[key] = tuple(vals)
    return vals


def _quad_moments(spec: WeightSpec, count: int, ctx: PrecisionContext, decay, *, return_rule=False):
    def f(x):
        w = spec.weight(x, ctx)
        out = [w]
        for _ in range(count - 1):
            w = w * x
            out.append(w)
        return out

    return quad_semiinfinite(f, 0, decay, ctx, relative=True, return_rule=return_rule)


# --------------------------------------------------------------------------
# route 1: Hankel LDL^T


def _table(spec, a, b2, norm2, ctx, route):
    mp = ctx.mp
    b = [mp.zero] + [mp.sqrt(v) for v in b2[1:]]
    log_gamma = [-mp.log(v) / 2 for v in norm2]
    gamma = [mp.exp(v) for v in log_gamma]
    return RecurrenceTable(spec, len(a) - 1, tuple(a), tuple(b), tuple(norm2), tuple(gamma),
                           tuple(log_gamma), ctx, route)


def recurrence_from_moments(moms, ctx: PrecisionContext | None = None, *, spec: WeightSpec | None = None,
                            nmax: int | None = None) -> RecurrenceTable:
    """Recurrence rows ``0..nmax`` from the Hankel matrix ``(mu_{i+j})``.

    With ``H = L D L^T`` (L unit lower triangular) the pivots are the monic
    norms ``D_n`` and ``a_n = L[n+1][n] - L[n][n-1]``.  Needs
    ``len(moms) >= 2*nmax + 2``.
    """
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    mu = [ctx.mpf(v) for v in moms]
    if nmax is None:
        nmax = (len(mu) - 2) // 2
    if nmax < 0 or len(mu) < 2 * nmax + 2:
        raise ValueError(f"{len(mu)} moments cannot give rows 0..{nmax} (need {2 * nmax + 2})")
    rows = nmax + 2
    L = [[mp.zero] * (nmax + 1) for _ in range(rows)]
    D = []
    for j in range(nmax + 1):
        d = mu[2 * j] - sum((L[j][k] ** 2 * D[k] for k in range(j)), mp.zero)
        if not d > 0:
            raise NumericalError(
                f"Hankel matrix lost positive definiteness at minor {j + 1} "
                f"(pivot {mp.nstr(d, 5)}); increase digits"
            )
        D.append(d)
        L[j][j] = mp.one
        for i in range(j + 1, rows):
            s = mu[i + j] - sum((L[i][k] * L[j][k] * D[k] for k in range(j)), mp.zero)
            L[i][j] = s / d
    a = [L[n + 1][n] - (L[n][n - 1] if n else 0) for n in range(nmax + 1)]
    b2 = [mp.zero] + [D[n] / D[n - 1] for n in range(1, nmax + 1)]
    return _table(spec, a, b2, D, ctx, "moments")


def recurrence_table(spec: WeightSpec, nmax: int, ctx: PrecisionContext | None = None) -> RecurrenceTable:
    """Hankel-route table, with moments from :func:`moments`."""
    ctx = ctx or PrecisionContext()
    return recurrence_from_moments(moments(spec, 2 * nmax + 2, ctx), ctx, spec=spec, nmax=nmax)


# --------------------------------------------------------------------------
# route 2: discretized Stieltjes

STIELTJES_DECAY_FACTOR = 1.5


def stieltjes_recurrence(spec: WeightSpec, nmax: int, ctx: PrecisionContext | None = None) -> RecurrenceTable:
    """Stieltjes procedure on a DE rule for the weight.

    The rule is the one that integrates ``x^k w(x)``, ``k <= 2 nmax + 1``, to
    the context tolerance, built with a decay hint different from the one
    used for moments so the two routes share no nodes.
    """
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    _, xs, ws = _quad_moments(spec, 2 * nmax + 2, ctx, spec.decay_hint() * STIELTJES_DECAY_FACTOR,
                              return_rule=True)
    ws = [wi * spec.weight(x, ctx) for x, wi in zip(xs, ws)]
    prev = [mp.zero] * len(xs)
    cur = [mp.one] * len(xs)
    a, b2, norm2 = [], [mp.zero], []
    for n in range(nmax + 1):
        nrm = mp.fsum(w * c * c for w, c in zip(ws, cur))
        if not nrm > 0:
            raise NumericalError(f"Stieltjes norm at degree {n} is not positive")
        an = mp.fsum(w * x * c * c for w, x, c in zip(ws, xs, cur)) / nrm
        norm2.append(nrm)
        a.append(an)
        if n:
            b2.append(nrm / norm2[n - 1])
        if n == nmax:
            break
        bb = b2[n]
        prev, cur = cur, [(x - an) * c - bb * p for x, c, p in zip(xs, cur, prev)]
    return _table(spec, a, b2, norm2, ctx, "stieltjes")


# --------------------------------------------------------------------------
# evaluation


def orthonormal_values(rec: RecurrenceTable, x, n: int, *, derivatives: bool = False):
    """``[p_0(x), ..., p_n(x)]`` (and derivatives) by the orthonormal recurrence."""
    if not 0 <= n <= rec.nmax:
        raise ValueError(f"degree {n} outside table range 0..{rec.nmax}")
    ctx = rec.ctx
    mp = ctx.mp
    x = ctx.mpf(x)
    a, b = rec.a, rec.b
    p = [rec.gamma[0]]
    dp = [mp.zero]
    for k in range(n):
        pm = p[k - 1] if k else mp.zero
        dpm = dp[k - 1] if k else mp.zero
        nxt = ((x - a[k]) * p[k] - b[k] * pm) / b[k + 1]
        dp.append(((x - a[k]) * dp[k] + p[k] - b[k] * dpm) / b[k + 1])
        p.append(nxt)
    return (p, dp) if derivatives else p


def eval_orthonormal(rec: RecurrenceTable, n: int, x):
    """``p_n(x)``: monic forward recurrence, then scaled by ``gamma_n``."""
    if not 0 <= n <= rec.nmax:
        raise ValueError(f"degree {n} outside table range 0..{rec.nmax}")
    ctx = rec.ctx
    mp = ctx.mp
    x = ctx.mpf(x)
    pm, pc = mp.zero, mp.one
    for k in range(n):
        b2 = rec.b[k] ** 2 if k else mp.zero
        pm, pc = pc, (x - rec.a[k]) * pc - b2 * pm
    return pc * rec.gamma[n]


def orthonormal_functions(rec: RecurrenceTable, x, n: int, *, derivatives: bool = False):
    """``q_k = sqrt(w(x)) p_k(x)`` for ``k <= n`` (and ``sqrt(w) p_k'``).

    The weight factor enters through ``q_0`` and is carried by the linear
    recurrence, so the returned values are O(1) even where ``w`` and ``p_k``
    separately are not.
    """
    if rec.spec is None:
        raise ValueError("table has no weight attached")
    if not 0 <= n <= rec.nmax:
        raise ValueError(f"degree {n} outside table range 0..{rec.nmax}")
    ctx = rec.ctx
    mp = ctx.mp
    x = ctx.mpf(x)
    if x < 0 or (x == 0 and rec.spec.alpha < 0):
        raise ValueError(f"weight is not finite at x = {x}")
    a, b = rec.a, rec.b
    q = [mp.exp(rec.spec.log_weight(x, ctx) / 2 + rec.log_gamma[0])]
    r = [mp.zero]
    for k in range(n):
        qm = q[k - 1] if k else mp.zero
        rm = r[k - 1] if k else mp.zero
        r.append(((x - a[k]) * r[k] + q[k] - b[k] * rm) / b[k + 1])
        q.append(((x - a[k]) * q[k] - b[k] * qm) / b[k + 1])
    return (q, r) if derivatives else q
