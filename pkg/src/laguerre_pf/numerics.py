"""Precision-threaded scalar numerics: DE quadrature, Golub-Welsch, special functions.

Every routine takes a :class:`PrecisionContext`.  The context owns a private
``mpmath`` context, so no routine here reads or mutates the global
``mpmath.mp`` precision.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import mpmath

GUARD_DIGITS = 15
EXTRAPOLATION_MARGIN = 100
TARGET_FLOOR_MARGIN = 5  # tightest allowed quad_target is 10**-(digits-5)

_MP_CONTEXTS: dict[int, mpmath.ctx_mp.MPContext] = {}
_MP_LOCK = threading.Lock()


def _mp_for(dps: int) -> mpmath.ctx_mp.MPContext:
    with _MP_LOCK:
        mp = _MP_CONTEXTS.get(dps)
        if mp is None:
            mp = mpmath.MPContext()
            mp.dps = dps
            _MP_CONTEXTS[dps] = mp
        return mp


class NumericalError(RuntimeError):
    """Base class for numerical failures (insufficient precision, no convergence)."""


class QuadratureError(NumericalError):
    def __init__(self, message: str, estimates=None):
        super().__init__(message)
        self.estimates = estimates


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision and quadrature budget.

    ``digits`` is the decimal precision the caller cares about; arithmetic
    runs with ``GUARD_DIGITS`` extra.  ``quad_target`` defaults to
    ``10**-(digits-10)``.
    """

    digits: int = 40
    quad_target: float | str | None = None
    max_nodes: int = 200_000

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < 30:
            raise ValueError(f"digits must be an integer >= 30, got {self.digits!r}")
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        if self.quad_target is not None:
            floor = self.mp.mpf(10) ** (-(self.digits - TARGET_FLOOR_MARGIN))
            if not self.mp.mpf(str(self.quad_target)) >= floor:
                raise ValueError(
                    f"quad_target {self.quad_target} is below 1e-{self.digits - TARGET_FLOOR_MARGIN}, "
                    "not achievable at this precision"
                )

    @cached_property
    def mp(self) -> mpmath.ctx_mp.MPContext:
        return _mp_for(int(self.digits) + GUARD_DIGITS)

    @cached_property
    def target(self):
        if self.quad_target is None:
            return self.mp.mpf(10) ** (-(self.digits - 10))
        return self.mp.mpf(str(self.quad_target))

    @cached_property
    def eps(self):
        """Truncation threshold for dropping quadrature terms."""
        return self.mp.mpf(10) ** (-(self.digits + GUARD_DIGITS - 2))

    # cached mp objects are rebuilt on the other side of a pickle
    def __getstate__(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)

    def with_digits(self, digits: int) -> "PrecisionContext":
        return replace(self, digits=int(digits), quad_target=None)

    def mpf(self, value):
        """Convert ints, floats, strings, Fractions and foreign mpfs."""
        if isinstance(value, Fraction):
            return self.mp.mpf(value.numerator) / value.denominator
        return self.mp.mpf(value)


# --------------------------------------------------------------------------
# double-exponential trapezoid engine


def _as_list(v):
    if isinstance(v, (list, tuple)):
        return list(v), True
    return [v], False


def _de_trapezoid(node, f, ctx: PrecisionContext, *, relative: bool, smax: float,
                  what: str):
    """Trapezoid rule in the DE variable ``s`` with level halving.

    ``node(s)`` returns ``(args, jac)``; the integrand term is ``jac * f(*args)``.
    Returns ``(value, nodes)`` where ``nodes`` lists ``(args, h*jac)`` of the
    final level.
    """
    mp = ctx.mp
    eps = ctx.eps
    h = mp.mpf(1) / 2
    records = {}  # s-index at current finest spacing -> (args, jac, values)
    vector = False

    def term(s):
        nonlocal vector
        args, jac = node(s)
        vals, vector = _as_list(f(*args))
        return args, jac, [jac * v for v in vals]

    s0 = term(mp.zero)
    acc = list(s0[2])
    records[0] = s0

    def negligible(vals):
        return all(abs(v) <= eps * abs(a) for v, a in zip(vals, acc))

    bounds = []
    for direction in (1, -1):
        quiet = 0
        j = 0
        while True:
            j += direction
            s = j * h
            if abs(s) > smax:
                break
            rec = term(s)
            records[j] = rec
            acc = [a + v for a, v in zip(acc, rec[2])]
            quiet = quiet + 1 if negligible(rec[2]) else 0
            if quiet >= 2:
                break
        bounds.append(j)
    j_hi, j_lo = bounds
    est = [h * a for a in acc]
    prev = None
    last_diff = None

    while True:
        if len(records) > ctx.max_nodes:
            raise QuadratureError(
                f"{what}: no convergence within {ctx.max_nodes} nodes",
                estimates=(prev, est),
            )
        prev = est
        h = h / 2
        new = {}
        for j, rec in records.items():
            new[2 * j] = rec
        for j in range(2 * j_lo + 1, 2 * j_hi, 2):
            rec = term(j * h)
            new[j] = rec
            acc = [a + v for a, v in zip(acc, rec[2])]
        records = new
        j_lo, j_hi = 2 * j_lo, 2 * j_hi
        est = [h * a for a in acc]
        diff = mp.zero
        for e, p in zip(est, prev):
            d = abs(e - p)
            if relative and d:
                d = d / abs(e)
            diff = max(diff, d)
        if diff <= ctx.target:
            break
        # DE levels roughly square the error; trust that only well inside
        # the asymptotic regime, never beyond squaring, and with a margin
        # since the observed power drifts slightly downward level to level.
        if last_diff is not None and 0 < diff < last_diff < mp.mpf("1e-3"):
            power = min(mp.mpf(2), mp.log(diff) / mp.log(last_diff))
            if diff ** power <= ctx.target / EXTRAPOLATION_MARGIN:
                break
        last_diff = diff
    nodes = [(rec[0], h * rec[1]) for _, rec in sorted(records.items())]
    value = est if vector else est[0]
    return value, nodes


def quad_endpoint(f: Callable, a, b, sing: tuple = (0, 0), ctx: PrecisionContext | None = None,
                  *, distances: bool = False):
    """Integrate ``f(x) * (x-a)**p * (b-x)**q`` over ``[a, b]``.

    ``f`` is the regular factor and ``sing = (p, q)`` the declared edge
    exponents (``p, q > -1``).  The substitution ``x = a + (b-a) sin^2(theta)``
    absorbs half-integer edge powers exactly; the theta integral is done by
    tanh-sinh.  With ``distances=True`` ``f`` is called as
    ``f(x, x - a, b - x)`` with both edge distances computed without
    cancellation; use this when ``f`` itself has log-type edge behaviour.

    ``f`` may return a sequence, in which case a list is returned.
    """
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    a, b = ctx.mpf(a), ctx.mpf(b)
    if not a < b:
        raise ValueError(f"quad_endpoint needs a < b, got [{a}, {b}]")
    p, q = ctx.mpf(sing[0]), ctx.mpf(sing[1])
    if p <= -1 or q <= -1:
        raise ValueError("edge exponents must exceed -1")
    L = b - a
    half_pi = mp.pi / 2
    pref = 2 * L ** (p + q + 1)
    ep, eq = 2 * p + 1, 2 * q + 1

    def node(s):
        u = half_pi * mp.sinh(s)
        lo = half_pi / (1 + mp.exp(-2 * u))   # theta
        hi = half_pi / (1 + mp.exp(2 * u))    # pi/2 - theta
        dtheta = mp.pi * half_pi * mp.cosh(s) / ((1 + mp.exp(2 * u)) * (1 + mp.exp(-2 * u)))
        sn, cs = mp.sin(lo), mp.sin(hi)
        dl, dr = L * sn * sn, L * cs * cs
        x = a + dl if lo < hi else b - dr
        jac = pref * dtheta * sn ** ep * cs ** eq
        return ((x, dl, dr) if distances else (x,)), jac

    value, _ = _de_trapezoid(node, f, ctx, relative=False, smax=6.5, what="quad_endpoint")
    return value


def quad_semiinfinite(f: Callable, a, decay, ctx: PrecisionContext | None = None, *,
                      relative: bool = False, return_rule: bool = False):
    """Integrate ``f`` over ``[a, inf)`` with the exponential-decay DE map.

    The map is ``x = a + exp(s - exp(-s)) / decay``; ``decay`` should be the
    rate of the eventual ``exp(-decay * x)`` behaviour.  ``f`` may return a
    sequence (all components converge together).  With ``relative=True`` each
    component is converged to ``quad_target`` relative to its own size, which
    is what moment vectors spanning many decades need.

    With ``return_rule=True`` also returns ``(nodes, weights)`` of the final
    trapezoid level, weights *excluding* ``f``.
    """
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    a = ctx.mpf(a)
    lam = ctx.mpf(decay)
    if not lam > 0:
        raise ValueError("decay hint must be positive")

    def node(s):
        es = mp.exp(-s)
        d = mp.exp(s - es) / lam
        return (a + d,), d * (1 + es)

    value, nodes = _de_trapezoid(node, f, ctx, relative=relative, smax=7.5,
                                 what="quad_semiinfinite")
    if return_rule:
        return value, [n[0][0] for n in nodes], [n[1] for n in nodes]
    return value


# --------------------------------------------------------------------------
# Golub-Welsch


def _tridiagonal_eigen(d: list, e: list, z: list, mp) -> None:
    """Implicit QL on a symmetric tridiagonal matrix, in place.

    ``e[i]`` couples ``i`` and ``i+1``; only the first row ``z`` of the
    eigenvector matrix is tracked, which is all Gauss weights need.
    """
    n = len(d)
    e.append(mp.zero)
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 100:
                raise NumericalError("tridiagonal QL did not converge")
            g = (d[l + 1] - d[l]) / (2 * e[l])
            r = mp.hypot(g, 1)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0 else -r))
            s = c = mp.one
            p = mp.zero
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = mp.hypot(f, g)
                e[i + 1] = r
                if r == 0:
                    d[i + 1] -= p
                    e[m] = mp.zero
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zf = z[i + 1]
                z[i + 1] = s * z[i] + c * zf
                z[i] = c * z[i] - s * zf
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = mp.zero
    e.pop()


def gauss_from_jacobi(rec, n: int, ctx: PrecisionContext | None = None):
    """n-point Gauss rule of the weight behind a recurrence table.

    Nodes are the eigenvalues of the leading n x n Jacobi matrix, weights are
    ``mass * v0**2`` with ``v0`` the first eigenvector components.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > rec.nmax + 1:
        raise ValueError(f"rule of size {n} needs {n} recurrence rows, table has {rec.nmax + 1}")
    ctx = ctx or rec.ctx
    mp = ctx.mp
    d = [ctx.mpf(v) for v in rec.a[:n]]
    e = [ctx.mpf(v) for v in rec.b[1:n]]
    z = [mp.one] + [mp.zero] * (n - 1)
    _tridiagonal_eigen(d, e, z, mp)
    mass = ctx.mpf(rec.norm2[0])
    pairs = sorted(zip(d, z))
    return [p[0] for p in pairs], [mass * p[1] ** 2 for p in pairs]


# --------------------------------------------------------------------------
# special functions

_SPECIAL = {
    "loggamma": lambda mp, x: mp.loggamma(x),
    "bessel_j0": lambda mp, x: mp.besselj(0, x),
    "bessel_j0_prime": lambda mp, x: -mp.besselj(1, x),
    "bessel_i0": lambda mp, x: mp.besseli(0, x),
    "bessel_i0_prime": lambda mp, x: mp.besseli(1, x),
    "bessel_k0": lambda mp, x: mp.besselk(0, x),
    "bessel_k0_prime": lambda mp, x: -mp.besselk(1, x),
    "airy_ai": lambda mp, x: mp.airyai(x),
    "airy_ai_prime": lambda mp, x: mp.airyai(x, derivative=1),
}

_POSITIVE_ONLY = {"loggamma", "bessel_k0", "bessel_k0_prime"}


def special(name: str, x, ctx: PrecisionContext | None = None):
    """Real-argument special functions at the context precision."""
    ctx = ctx or PrecisionContext()
    try:
        fn = _SPECIAL[name]
    except KeyError:
        raise ValueError(f"unknown special function {name!r}; known: {sorted(_SPECIAL)}") from None
    x = ctx.mpf(x)
    if name in _POSITIVE_ONLY and not x > 0:
        raise ValueError(f"{name} needs x > 0, got {x}")
    return fn(ctx.mp, x)


def log_factorial(n: int, ctx: PrecisionContext):
    return ctx.mp.loggamma(n + 1)


def required_digits(nmax: int) -> int:
    """Digits needed for Hankel-conditioned work up to degree ``nmax``."""
    if nmax <= 1:
        return 30
    return int(math.ceil(2 * nmax * math.log10(nmax) + 30))


def auto_context(nmax: int, ctx: PrecisionContext | None = None) -> PrecisionContext:
    ctx = ctx or PrecisionContext()
    need = required_digits(nmax)
    return ctx if ctx.digits >= need else ctx.with_digits(need)


def polyval(coeffs: Sequence, x):
    """Evaluate ``sum c_k x**k`` (coefficients in increasing degree)."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def to_fraction(x) -> Fraction:
    """Exact rational value of a finite mpf."""
    sign, m, e, _ = x._mpf_
    if not m and e:
        raise ValueError(f"{x} is not finite")
    m = -int(m) if sign else int(m)
    return Fraction(m * 2 ** e) if e >= 0 else Fraction(m, 2 ** -e)
