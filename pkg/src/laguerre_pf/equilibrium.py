"""One-cut equilibrium measure on [0, beta] for the Laguerre-type potential.

The density is ``psi(x) = (1/2pi) sqrt((beta-x)/x) h(x)``.  ``beta`` solves
the endpoint equation and ``h`` comes from the residue at infinity, so the
only quadratures are for derived quantities (moments, g, xi, l_V).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .numerics import NumericalError, PrecisionContext, polyval, quad_endpoint
from .potential import Potential, eval_potential


class NotOneCutError(NumericalError):
    """h fails to stay positive on [0, beta]."""


def _A(j: int, beta):
    # coefficients of sqrt(y/(y-beta)) = sum_j A_j y^-j
    return comb(2 * j, j) * (beta / 4) ** j


def _vprime(p: Potential, ctx: PrecisionContext | None):
    c = p.derivative_coeffs()
    return c if ctx is None else [ctx.mpf(v) for v in c]


def endpoint_residual(p: Potential, beta, ctx: PrecisionContext, *, method: str = "closed"):
    """``int_0^beta V'(x) sqrt(x/(beta-x)) dx - 2 pi``.

    ``method="closed"`` uses ``int_0^b x^k sqrt(x/(b-x)) dx = pi A_{k+1}(b)``;
    ``method="quad"`` integrates numerically.
    """
    mp = ctx.mp
    beta = ctx.mpf(beta)
    c = _vprime(p, ctx)
    if method == "closed":
        return mp.pi * sum(ck * _A(k + 1, beta) for k, ck in enumerate(c)) - 2 * mp.pi
    if method == "quad":
        return quad_endpoint(lambda x: polyval(c, x), 0, beta, (mp.mpf(1) / 2, -mp.mpf(1) / 2), ctx) - 2 * mp.pi
    raise ValueError(f"unknown method {method!r}")


def _scan_bracket(fn, lo, hi, factor=2):
    """First geometric sub-bracket of [lo, hi] with a sign change."""
    a, fa = lo, fn(lo)
    while a < hi:
        b = min(a * factor, hi)
        fb = fn(b)
        if fa == 0:
            return a, a
        if (fa < 0) != (fb < 0) or fb == 0:
            return a, b
        a, fa = b, fb
    return None


def solve_endpoint(p: Potential, ctx: PrecisionContext | None = None, *, bracket=(1e-6, 64)):
    """Right endpoint ``beta`` of the support."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    c = _vprime(p, ctx)
    if len(c) == 1:
        # V linear: pi beta c0 / 2 = 2 pi
        if not c[0] > 0:
            raise NumericalError("V'(x) = 1 + t_1 must be positive")
        beta = 4 / c[0]
    else:
        lo, hi = ctx.mpf(bracket[0]), ctx.mpf(bracket[1])
        fn = lambda b: endpoint_residual(p, b, ctx)
        br = _scan_bracket(fn, lo, hi)
        if br is None:
            raise NumericalError(
                f"endpoint residual has no sign change on the scanned bracket [{bracket[0]}, {bracket[1]}]"
            )
        a, b = br
        beta = a if a == b else mp.findroot(fn, (a, b), solver="anderson", tol=ctx.eps ** 2,
                                            maxsteps=200, verify=False)
        if not a <= beta <= b:
            beta = mp.findroot(fn, (a, b), solver="bisect", tol=ctx.eps ** 2, maxsteps=400,
                               verify=False)
    beta = ctx.mpf(beta)  # findroot returns extra working bits
    res = endpoint_residual(p, beta, ctx, method="quad")
    if abs(res) > 10 * ctx.target:
        raise NumericalError(f"endpoint equation residual {mp.nstr(res, 5)} above tolerance")
    return beta


def compute_h(p: Potential, beta, ctx: PrecisionContext | None = None) -> list:
    """Coefficients (increasing degree) of the degree nu-1 polynomial h.

    ``h(z) = sum_k c_k sum_{j<=k} A_j(beta) z^(k-j)`` with ``V'(y) = sum c_k y^k``.
    A Fraction ``beta`` gives exact Fraction coefficients.
    """
    exact = isinstance(beta, (int, Fraction))
    if exact:
        beta = Fraction(beta)
        c = _vprime(p, None)
    else:
        ctx = ctx or PrecisionContext()
        beta = ctx.mpf(beta)
        c = _vprime(p, ctx)
    deg = len(c) - 1
    h = [Fraction(0) if exact else ctx.mp.zero for _ in range(deg + 1)]
    for k, ck in enumerate(c):
        for j in range(k + 1):
            h[k - j] += ck * _A(j, beta)
    return h


def h_minimum(h: list, beta, ctx: PrecisionContext, grid: int = 1000):
    mp = ctx.mp
    pts = [beta * i / grid for i in range(grid + 1)]
    dh = [k * h[k] for k in range(1, len(h))]
    while len(dh) > 1 and dh[-1] == 0:
        dh.pop()
    if len(dh) == 2:
        pts.append(-dh[0] / dh[1])
    elif len(dh) > 2:
        roots = mp.polyroots(list(reversed(dh)), maxsteps=200, extraprec=2 * ctx.mp.prec)
        pts += [mp.re(r) for r in roots if abs(mp.im(r)) < ctx.eps ** (1 / 2)]
    return min(polyval(h, x) for x in pts if 0 <= x <= beta)


@dataclass(frozen=True)
class EquilibriumData:
    beta: object
    h_coeffs: tuple
    l_V: object
    h_min: object
    potential: Potential = field(repr=False)
    ctx: PrecisionContext = field(repr=False, compare=False)

    def h(self, x):
        return polyval(self.h_coeffs, x)

    def psi(self, x):
        return density(self, x)

    def g(self, z, side=None):
        return _g(self, z, side)

    def xi(self, z, side=None):
        return _xi(self, z, side)

    def moment(self, l: int):
        return equilibrium_moment(self, l, self.ctx)

    def record(self) -> dict:
        n = lambda v: self.ctx.mp.nstr(v, self.ctx.digits)
        return {
            "beta": n(self.beta),
            "h_coeffs": ",".join(n(v) for v in self.h_coeffs),
            "l_V": n(self.l_V),
            "h_min": n(self.h_min),
        }


def solve_equilibrium(p: Potential, ctx: PrecisionContext | None = None, *,
                      require_one_cut: bool = True) -> EquilibriumData:
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    beta = solve_endpoint(p, ctx)
    h = tuple(compute_h(p, beta, ctx))
    hmin = h_minimum(list(h), beta, ctx)
    if require_one_cut and not hmin > 0:
        raise NotOneCutError(
            f"h attains {mp.nstr(hmin, 8)} <= 0 on [0, beta={mp.nstr(beta, 8)}]; not one-cut regular"
        )
    # Euler-Lagrange at z = beta: 2 g(beta) - V(beta) - l_V = 0
    half = mp.mpf(1) / 2
    g_beta = quad_endpoint(lambda x, dl, dr: mp.log(dr) * polyval(h, x), 0, beta,
                           (-half, half), ctx, distances=True) / (2 * mp.pi)
    l_V = 2 * g_beta - eval_potential(p, beta)
    return EquilibriumData(beta, h, l_V, hmin, p, ctx)


def density(eq: EquilibriumData, x):
    """``psi_V(x)``; zero outside [0, beta], ``+inf`` at the hard edge."""
    mp = eq.ctx.mp
    x = eq.ctx.mpf(x)
    if x == 0:
        return mp.inf
    if not 0 < x < eq.beta:
        return mp.zero
    return mp.sqrt((eq.beta - x) / x) * polyval(eq.h_coeffs, x) / (2 * mp.pi)


def equilibrium_moment(eq: EquilibriumData, l: int, ctx: PrecisionContext | None = None):
    """``int_0^beta x^l psi_V(x) dx``."""
    if l < 0:
        raise ValueError("moment order must be nonnegative")
    ctx = ctx or eq.ctx
    mp = ctx.mp
    half = mp.mpf(1) / 2
    h = [ctx.mpf(v) for v in eq.h_coeffs]
    return quad_endpoint(lambda x: x ** l * polyval(h, x), 0, eq.beta, (-half, half), ctx) / (2 * mp.pi)


def _side(z, side, beta):
    if side not in (None, "+", "-"):
        raise ValueError(f"side must be '+', '-' or None, got {side!r}")
    if z < beta and side is None:
        raise ValueError(
            f"z = {z} lies on or left of the cut (-inf, beta]; pass side='+' or side='-'"
        )
    return side


def _g(eq: EquilibriumData, z, side=None):
    """``g(z) = int log(z - x) psi(x) dx``; boundary values for ``z < beta``."""
    ctx, mp = eq.ctx, eq.ctx.mp
    z = ctx.mpf(z)
    beta, h = eq.beta, eq.h_coeffs
    side = _side(z, side, beta)
    half = mp.mpf(1) / 2
    two_pi = 2 * mp.pi
    if z >= beta:
        return quad_endpoint(lambda x, dl, dr: mp.log(z - beta + dr) * polyval(h, x), 0, beta,
                             (-half, half), ctx, distances=True) / two_pi
    if z > 0:
        left = quad_endpoint(lambda x, dl, dr: mp.log(dr) * mp.sqrt(beta - x) * polyval(h, x),
                             0, z, (-half, 0), ctx, distances=True)
        right = quad_endpoint(lambda x, dl, dr: mp.log(dl) * polyval(h, x) / mp.sqrt(x),
                              z, beta, (0, half), ctx, distances=True)
        tail = quad_endpoint(lambda x: polyval(h, x) / mp.sqrt(x), z, beta, (0, half), ctx)
        re, im = (left + right) / two_pi, mp.pi * tail / two_pi
    elif z < 0:
        re = quad_endpoint(lambda x: mp.log(x - z) * polyval(h, x), 0, beta,
                           (-half, half), ctx) / two_pi
        im = mp.pi
    else:
        raise ValueError("g is singular at z = 0")
    return mp.mpc(re, im if side == "+" else -im)


def _xi(eq: EquilibriumData, z, side=None):
    """``xi(z) = -(1/2) int_beta^z sqrt((y-beta)/y) h(y) dy``."""
    ctx, mp = eq.ctx, eq.ctx.mp
    z = ctx.mpf(z)
    beta, h = eq.beta, eq.h_coeffs
    side = _side(z, side, beta)
    half = mp.mpf(1) / 2
    if z == beta:
        return mp.zero
    if z > beta:
        return -quad_endpoint(lambda y: polyval(h, y) / mp.sqrt(y), beta, z, (half, 0), ctx) / 2
    if z > 0:
        im = quad_endpoint(lambda y: polyval(h, y) / mp.sqrt(y), z, beta, (0, half), ctx) / 2
        re = mp.zero
    elif z < 0:
        # continue along the upper side past 0, where sqrt((y-beta)/y) is real
        re = quad_endpoint(lambda y, dl, dr: mp.sqrt(beta + dr) * polyval(h, y), z, 0,
                           (0, -half), ctx, distances=True) / 2
        im = mp.pi
    else:
        return mp.mpc(0, mp.pi if side == "+" else -mp.pi)
    return mp.mpc(re, im if side == "+" else -im)


def g_xi_l(eq: EquilibriumData, p: Potential | None = None, ctx: PrecisionContext | None = None):
    """``(g evaluator, xi evaluator, l_V)``; evaluators take ``(z, side=None)``."""
    if p is not None and p != eq.potential:
        raise ValueError("equilibrium data belongs to a different potential")
    if ctx is not None and ctx.digits != eq.ctx.digits:
        eq = solve_equilibrium(eq.potential, ctx)
    return eq.g, eq.xi, eq.l_V


@dataclass(frozen=True)
class SymmetrizedData:
    beta_tilde: object
    h_tilde_coeffs: tuple
    ctx: PrecisionContext = field(repr=False, compare=False)

    def phi(self, x):
        """Density of the symmetrized measure on [-beta_tilde, beta_tilde]."""
        mp = self.ctx.mp
        x = self.ctx.mpf(x)
        if not abs(x) < self.beta_tilde:
            return mp.zero
        return mp.sqrt(self.beta_tilde ** 2 - x * x) * polyval(self.h_tilde_coeffs, x) / (2 * mp.pi)


def symmetrize_check(p: Potential, ctx: PrecisionContext | None = None, *,
                     bracket=(1e-3, 8)) -> SymmetrizedData:
    """Equilibrium problem for ``W(x) = V(x^2)/2`` on the whole line.

    The endpoint ``b`` solves ``int_{-b}^{b} s W'(s) / sqrt(b^2 - s^2) ds = 2 pi``
    by quadrature (the companion equation holds identically since ``W'`` is
    odd); ``h~`` is the polynomial part of ``W'(z) / sqrt(z^2 - b^2)``.
    """
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    vp = _vprime(p, ctx)
    # W'(s) = s V'(s^2)
    wp = [mp.zero] * (2 * len(vp))
    for k, ck in enumerate(vp):
        wp[2 * k + 1] = ck
    half = mp.mpf(1) / 2

    def residual(b):
        return quad_endpoint(lambda s: s * polyval(wp, s), -b, b, (-half, -half), ctx) - 2 * mp.pi

    br = _scan_bracket(residual, ctx.mpf(bracket[0]), ctx.mpf(bracket[1]))
    if br is None:
        raise NumericalError(f"no sign change for the symmetrized endpoint on [{bracket[0]}, {bracket[1]}]")
    b = br[0] if br[0] == br[1] else mp.findroot(residual, br, solver="anderson",
                                                 tol=ctx.target ** 2, maxsteps=200, verify=False)
    b = ctx.mpf(b)
    # 1/sqrt(s^2 - b^2) = sum_j C_j s^(-1-2j), C_j = binom(2j, j) (b/2)^(2j)
    deg = len(wp) - 2
    ht = [mp.zero] * (deg + 1)
    for k, wk in enumerate(wp):
        j = 0
        while k - 1 - 2 * j >= 0:
            ht[k - 1 - 2 * j] += wk * comb(2 * j, j) * (b / 2) ** (2 * j)
            j += 1
    return SymmetrizedData(b, tuple(ht), ctx)
