"""Edge maps and leading-order local approximations of the one-point function.

Only ``alpha = 0`` is supported for the densities (order-0 Bessel functions).

Real-axis form of the S = I hard-edge density.  With ``w = zeta^(3/2)``,
``w' = N pi psi(x)`` and the Bessel map ``f~ = -w^2/4`` on the upper side of
(0, beta), ``2 f~^(1/2) = i w`` turns ``I_0, I_0'`` into ``J_0, i J_1`` and::

    rho(x) = (1/N) [ (w w'/2)(J0^2 + J1^2) - w (a'/a + w'/(2w)) J0 J1 ]
    a'/a   = beta / (4 x (x - beta))

The first bracket equals ``(3/4) zeta' F0(zeta)``.  The two ``1/(4x)`` poles
in the second cancel, so the formula is regular at the hard edge.

Soft edge: ``rho(x) = (f'/N) [Ai'(f)^2 - f Ai(f)^2]`` with the Airy map f.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .equilibrium import EquilibriumData
from .numerics import PrecisionContext, polyval, quad_endpoint

DEFAULT_HARD_CUTOFF = Fraction(1, 8)   # x* = beta/8
DEFAULT_SOFT_WINDOW = Fraction(1, 8)   # |x - beta| <= beta/8
F0_MAX_TERMS = 3


def _require_alpha0(eq: EquilibriumData):
    if eq.potential.alpha != 0:
        raise ValueError("edge densities are implemented for alpha = 0 only")


@dataclass(frozen=True)
class EdgeMaps:
    """Conformal maps of the local parametrices for one (potential, N)."""

    eq: EquilibriumData
    N: int
    hard_cutoff: Fraction = DEFAULT_HARD_CUTOFF
    soft_window: Fraction = DEFAULT_SOFT_WINDOW
    ctx: PrecisionContext = field(default=None, compare=False)

    def __post_init__(self):
        if self.ctx is None:
            object.__setattr__(self, "ctx", self.eq.ctx)

    # ---- hard edge -------------------------------------------------------

    def zeta32(self, x):
        """``(N/2) int_0^x sqrt((beta-s)/s) h(s) ds`` for ``0 <= x <= beta``."""
        ctx, mp = self.ctx, self.ctx.mp
        x = ctx.mpf(x)
        beta, h = self.eq.beta, self.eq.h_coeffs
        if not 0 <= x <= beta:
            raise ValueError(f"zeta map is defined on [0, beta], got x = {x}")
        if x == 0:
            return mp.zero
        gap = beta - x
        half = mp.mpf(1) / 2
        val = quad_endpoint(lambda s, dl, dr: mp.sqrt(gap + dr) * polyval(h, s), 0, x,
                            (-half, 0), ctx, distances=True)
        return self.N * val / 2

    def zeta(self, x):
        return self.zeta32(x) ** (self.ctx.mp.mpf(2) / 3)

    def zeta_prime(self, x):
        mp = self.ctx.mp
        x = self.ctx.mpf(x)
        w = self.zeta32(x)
        return 2 * self.w_prime(x) / (3 * w ** (mp.mpf(1) / 3))

    def w_prime(self, x):
        """``d/dx zeta^(3/2) = (N/2) sqrt((beta-x)/x) h(x)``."""
        mp = self.ctx.mp
        x = self.ctx.mpf(x)
        return self.N * mp.sqrt((self.eq.beta - x) / x) * polyval(self.eq.h_coeffs, x) / 2

    def f_bessel(self, x):
        """Boundary value from above of ``f~ = ((N/4) int_0^x sqrt((s-beta)/s) h ds)^2``.

        On the upper side ``sqrt(s - beta) = i sqrt(beta - s)``, so the square
        is real and negative.
        """
        mp = self.ctx.mp
        inner = mp.mpc(0, 1) * self.zeta32(x) / 2
        return mp.re(inner * inner)

    # ---- soft edge -------------------------------------------------------

    def _airy_integral(self, x):
        # (3N/4) |int_beta^x sqrt(|s-beta|/s) h ds|
        ctx, mp = self.ctx, self.ctx.mp
        beta, h = self.eq.beta, self.eq.h_coeffs
        half = mp.mpf(1) / 2
        if x > beta:
            v = quad_endpoint(lambda s: polyval(h, s) / mp.sqrt(s), beta, x, (half, 0), ctx)
        else:
            v = quad_endpoint(lambda s: polyval(h, s) / mp.sqrt(s), x, beta, (0, half), ctx)
        return 3 * self.N * v / 4

    def f_airy(self, x):
        """Airy map: ``f(beta) = 0``, negative on (0, beta), positive beyond."""
        ctx, mp = self.ctx, self.ctx.mp
        x = ctx.mpf(x)
        if not x > 0:
            raise ValueError("Airy map needs x > 0")
        if x == self.eq.beta:
            return mp.zero
        v = self._airy_integral(x) ** (mp.mpf(2) / 3)
        return v if x > self.eq.beta else -v

    def f_airy_prime(self, x):
        ctx, mp = self.ctx, self.ctx.mp
        x = ctx.mpf(x)
        beta, h = self.eq.beta, self.eq.h_coeffs
        if x == beta:
            return (self.N * polyval(h, beta) / (2 * mp.sqrt(beta))) ** (mp.mpf(2) / 3)
        G = self._airy_integral(x)
        dG = 3 * self.N * mp.sqrt(abs(x - beta) / x) * polyval(h, x) / 4
        return 2 * dG / (3 * G ** (mp.mpf(1) / 3))

    # ---- outside parametrix ---------------------------------------------

    def a(self, z, side=None):
        return outside_parametrix_scalars(self.eq, z, side)[0]

    def phi(self, z, side=None):
        return outside_parametrix_scalars(self.eq, z, side)[1]

    def D(self, z, side=None):
        return outside_parametrix_scalars(self.eq, z, side)[2]


def zeta_map(eq: EquilibriumData, N: int, x, ctx: PrecisionContext | None = None):
    """``zeta(x) = [(N/2) int_0^x sqrt((beta-s)/s) h(s) ds]^(2/3)``."""
    return EdgeMaps(eq, N, ctx=ctx or eq.ctx).zeta(x)


def hard_edge_density(maps: EdgeMaps, x, ctx: PrecisionContext | None = None):
    """Leading-order (S = I) Bessel-parametrix density near 0."""
    _require_alpha0(maps.eq)
    ctx = ctx or maps.ctx
    mp = ctx.mp
    x = ctx.mpf(x)
    beta = maps.eq.beta
    if not 0 < x <= maps.hard_cutoff * beta:
        raise ValueError(
            f"x = {mp.nstr(x, 8)} outside the hard-edge regime (0, {mp.nstr(maps.hard_cutoff * beta, 8)}]"
        )
    N = maps.N
    w = maps.zeta32(x)
    wp = maps.w_prime(x)
    zeta = w ** (mp.mpf(2) / 3)
    zp = 2 * wp / (3 * w ** (mp.mpf(1) / 3))
    J0, J1 = mp.besselj(0, w), mp.besselj(1, w)
    first = 3 * zp * F0_eval(zeta, ctx) / 4
    # a'/a + w'/(2w) with the 1/(4x) poles cancelled by hand
    prefactor = 1 / (4 * (x - beta)) + (wp / w - 1 / (2 * x)) / 2
    return (first - w * prefactor * J0 * J1) / N


def soft_edge_density(maps: EdgeMaps, x, ctx: PrecisionContext | None = None):
    """Airy-kernel diagonal transplanted through the Airy map."""
    _require_alpha0(maps.eq)
    ctx = ctx or maps.ctx
    mp = ctx.mp
    x = ctx.mpf(x)
    beta = maps.eq.beta
    if not abs(x - beta) <= maps.soft_window * beta:
        raise ValueError(
            f"x = {mp.nstr(x, 8)} outside the soft-edge window beta +- {mp.nstr(maps.soft_window * beta, 8)}"
        )
    f = maps.f_airy(x)
    fp = maps.f_airy_prime(x)
    ai, aip = mp.airyai(f), mp.airyai(f, derivative=1)
    return fp * (aip * aip - f * ai * ai) / maps.N


# --------------------------------------------------------------------------
# F0 and its large-zeta expansion


def F0_eval(zeta, ctx: PrecisionContext | None = None):
    """``[J0(zeta^(3/2))^2 + J0'(zeta^(3/2))^2] zeta^2``."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    zeta = ctx.mpf(zeta)
    if not zeta > 0:
        raise ValueError("F0 needs zeta > 0")
    w = zeta ** (mp.mpf(3) / 2)
    return (mp.besselj(0, w) ** 2 + mp.besselj(1, w) ** 2) * zeta ** 2


def hankel_coefficient(k: int, nu: int) -> Fraction:
    """``a_k(nu) = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (k! 8^k)``."""
    num = 1
    for j in range(1, k + 1):
        num *= 4 * nu * nu - (2 * j - 1) ** 2
    den = 8 ** k
    for j in range(1, k + 1):
        den *= j
    return Fraction(num, den)


def bessel_w_series(z, terms: int, ctx: PrecisionContext):
    """Truncated ``w1..w4`` of the large-argument forms of ``J0`` and ``J0' = -J1``.

    ``w1, w2`` use ``a_k(0)``; ``w3, w4`` use ``b_k = a_k(1)``.  Coefficients
    with index below ``2*terms - 1`` are kept (``terms=1`` gives 1, 0, 1, 0).
    """
    kmax = 2 * terms - 2
    z = ctx.mpf(z)

    def series(nu, parity):
        s = ctx.mp.zero
        for k in range(parity, kmax + 1, 2):
            c = hankel_coefficient(k, nu)
            s += (-1) ** (k // 2) * ctx.mpf(c) / z ** k
        return s

    return series(0, 0), series(0, 1), series(1, 0), series(1, 1)


def F0_expansion_parts(zeta, terms: int, ctx: PrecisionContext | None = None):
    """``(f0, fS, fC)`` with ``F0 ~ (1/pi) zeta^(1/2) [f0 + fS sin 2w + fC cos 2w]``."""
    if not 1 <= terms <= F0_MAX_TERMS:
        raise ValueError(f"terms must be in 1..{F0_MAX_TERMS}, got {terms}")
    ctx = ctx or PrecisionContext()
    w = ctx.mpf(zeta) ** (ctx.mp.mpf(3) / 2)
    w1, w2, w3, w4 = bessel_w_series(w, terms, ctx)
    return (w1 * w1 + w2 * w2 + w3 * w3 + w4 * w4,
            w1 * w1 - w2 * w2 - w3 * w3 + w4 * w4,
            2 * (w1 * w2 - w3 * w4))


def F0_expansion(zeta, terms: int = 1, ctx: PrecisionContext | None = None):
    """Truncated large-zeta series of F0; ``terms=1`` is ``(2/pi) zeta^(1/2)``."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    zeta = ctx.mpf(zeta)
    if not zeta > 0:
        raise ValueError("F0 needs zeta > 0")
    f0, fS, fC = F0_expansion_parts(zeta, terms, ctx)
    w2 = 2 * zeta ** (mp.mpf(3) / 2)
    return mp.sqrt(zeta) * (f0 + fS * mp.sin(w2) + fC * mp.cos(w2)) / mp.pi


def F0_leading_constant(ctx: PrecisionContext | None = None):
    """``c0 = 2/pi``: ``f0 = w1^2 + w3^2 = 2`` at leading order."""
    ctx = ctx or PrecisionContext()
    f0, _, _ = F0_expansion_parts(1, 1, ctx)
    return f0 / ctx.mp.pi


def _period_grid(zeta, samples: int, ctx):
    # zeta values spanning one period of 2 zeta^(3/2), uniform in phase
    mp = ctx.mp
    w0 = ctx.mpf(zeta) ** (mp.mpf(3) / 2)
    return [(w0 + mp.pi * k / samples) ** (mp.mpf(2) / 3) for k in range(samples)]


def F0_remainder_constant(zeta, ctx: PrecisionContext | None = None, *, samples: int = 64):
    """``max |F0(s) - c0 s^(1/2)| * s`` over one oscillation period starting at ``zeta``."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    c0 = 2 / mp.pi
    return max(abs(F0_eval(s, ctx) - c0 * mp.sqrt(s)) * s for s in _period_grid(zeta, samples, ctx))


def F0_period_average(zeta, ctx: PrecisionContext | None = None, *, samples: int = 64):
    """Mean of ``F0(s) / s^(1/2)`` over one oscillation period starting at ``zeta``."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    grid = _period_grid(zeta, samples, ctx)
    return mp.fsum(F0_eval(s, ctx) / mp.sqrt(s) for s in grid) / samples


# --------------------------------------------------------------------------
# outside parametrix


def outside_parametrix_scalars(eq: EquilibriumData, z, side=None):
    """``(a(z), phi(z), D(z))`` with principal branches.

    Real ``z >= beta`` gives real values; ``z < beta`` needs ``side='+'`` or
    ``'-'`` (boundary value from above or below).
    """
    ctx, mp = eq.ctx, eq.ctx.mp
    z = ctx.mpf(z)
    beta = eq.beta
    alpha = ctx.mpf(eq.potential.alpha)
    q = mp.mpf(1) / 4
    if z >= beta:
        a = ((z - beta) / z) ** q
        phi = 2 * z - beta + 2 * mp.sqrt(z) * mp.sqrt(z - beta)
        D = (z / phi) ** (alpha / 2)
        return a, phi, D
    if side not in ("+", "-"):
        raise ValueError(f"z = {z} is on or left of [0, beta]; pass side='+' or side='-'")
    if z == 0:
        raise ValueError("a(z) is singular at z = 0")
    # upper side: arg(z - beta) = pi, arg z = pi (z < 0) or 0 (0 < z < beta)
    zc, zb = mp.mpc(z, 0), mp.mpc(z - beta, 0)
    a = zb ** q / zc ** q
    phi = 2 * zc - beta + 2 * mp.sqrt(zc) * mp.sqrt(zb)
    D = zc ** (alpha / 2) / phi ** (alpha / 2)
    if side == "-":
        a, phi, D = mp.conj(a), mp.conj(phi), mp.conj(D)
    return a, phi, D
