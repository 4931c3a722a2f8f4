"""Leading coefficient e0, weighted fits in powers of N, Richardson extrapolation."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .equilibrium import (EquilibriumData, NotOneCutError, compute_h, equilibrium_moment, h_minimum,
                          solve_endpoint, solve_equilibrium)
from .numerics import NumericalError, PrecisionContext, to_fraction
from .potential import Potential

ODD_PROBE_POWER = 1


# --------------------------------------------------------------------------
# e0 oracles


def _path_moments(p: Potential, s, ctx: PrecisionContext):
    """Equilibrium moments ``m_1..m_nu`` for the potential with deformation ``s t``."""
    mp = ctx.mp
    ps = p.scaled(s if isinstance(s, Fraction) else to_fraction(ctx.mpf(s)))
    beta = solve_endpoint(ps, ctx)
    h = tuple(compute_h(ps, beta, ctx))
    hmin = h_minimum(list(h), beta, ctx)
    if not hmin > 0:
        raise NotOneCutError(f"path leaves the one-cut regime at s = {mp.nstr(s, 8)} (h_min = {mp.nstr(hmin, 5)})")
    eq = EquilibriumData(beta, h, mp.nan, hmin, ps, ctx)
    return [equilibrium_moment(eq, l, ctx) for l in range(1, p.nu + 1)]


def e0_path_oracle(p: Potential, ctx: PrecisionContext | None = None):
    """``e0(t) = -int_0^1 sum_l t_l m_l(s t) ds`` (Gauss-Legendre, degree doubling)."""
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    if p.is_undeformed:
        return mp.zero
    t = [ctx.mpf(v) for v in p.t]

    def integrand(s):
        ms = _path_moments(p, s, ctx)
        return mp.fsum(tl * ml for tl, ml in zip(t, ms))

    val, err = mp.quad(integrand, [0, 1], method="gauss-legendre", error=True)
    if err > 10 * ctx.target:
        raise NumericalError(f"path integral for e0 did not converge (error estimate {mp.nstr(err, 3)})")
    return -val


def energy(p: Potential, ctx: PrecisionContext | None = None):
    """``I_V(mu_V) = (int V dmu - l_V) / 2`` from the Euler-Lagrange identity."""
    ctx = ctx or PrecisionContext()
    eq = solve_equilibrium(p, ctx)
    c = p.poly_coeffs()
    vmean = ctx.mp.fsum(ctx.mpf(ck) * equilibrium_moment(eq, k, ctx) for k, ck in enumerate(c) if ck)
    return (vmean - eq.l_V) / 2


def e0_energy(p: Potential, ctx: PrecisionContext | None = None):
    """``e0 = I_{V_0} - I_{V_t}``, independent of the path integral."""
    ctx = ctx or PrecisionContext()
    return energy(Potential.undeformed(p.alpha), ctx) - energy(p, ctx)


# --------------------------------------------------------------------------
# fitting


@dataclass
class ExpansionFit:
    basis: list
    coeffs: list
    residuals: list
    odd_probe: object = None
    condition: object = None
    ctx: PrecisionContext = field(default=None, repr=False)

    def coefficient(self, power: int):
        return self.coeffs[self.basis.index(power)]

    def remainder(self, samples, drop=(2, 0)) -> dict:
        """``value - sum_{k in drop} e_k N^k`` per sample."""
        mp = self.ctx.mp
        out = {}
        for N, v in samples:
            out[N] = self.ctx.mpf(v) - mp.fsum(self.coefficient(k) * mp.mpf(N) ** k for k in drop if k in self.basis)
        return out

    def remainder_ratios(self, samples, pairs, drop=(2, 0)) -> dict:
        """``r(a)/r(b)``; nan where ``r(b)`` vanishes."""
        r = self.remainder(samples, drop)
        nan = self.ctx.mp.nan
        return {(a, b): (r[a] / r[b] if r[b] != 0 else nan) for a, b in pairs if a in r and b in r}

    def report(self) -> str:
        mp, d = self.ctx.mp, self.ctx.digits
        lines = [f"basis={','.join(str(k) for k in self.basis)}"]
        lines += [f"e[N^{k}]={mp.nstr(c, d)}" for k, c in zip(self.basis, self.coeffs)]
        lines.append(f"odd_probe={'none' if self.odd_probe is None else mp.nstr(self.odd_probe, d)}")
        lines.append(f"condition={mp.nstr(self.condition, 8)}")
        return "\n".join(lines) + "\n"

    def residuals_csv(self) -> str:
        mp, d = self.ctx.mp, self.ctx.digits
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["N", "residual"])
        for N, r in self.residuals:
            w.writerow([N, mp.nstr(r, d)])
        return out.getvalue()


def _weighted_lstsq(samples, basis, ctx, weight_power):
    mp = ctx.mp
    half = mp.mpf(weight_power) / 2
    rows, rhs = [], []
    for N, v in samples:
        Nm = mp.mpf(N)
        sw = Nm ** half  # weight N^p on squared residuals
        rows.append([sw * Nm ** k for k in basis])
        rhs.append(sw * ctx.mpf(v))
    A = mp.matrix(rows)
    y = mp.matrix(rhs)
    # column scaling so the condition number reflects the fit, not the units
    scales = [max(abs(A[i, j]) for i in range(A.rows)) for j in range(A.cols)]
    As = mp.matrix([[A[i, j] / scales[j] for j in range(A.cols)] for i in range(A.rows)])
    sv = mp.svd_r(As, compute_uv=False)
    smax, smin = max(sv), min(sv)
    if not smin > smax * mp.sqrt(ctx.eps):
        raise NumericalError(f"fit is rank deficient (singular values {mp.nstr(smax, 3)} .. {mp.nstr(smin, 3)})")
    xs, _ = mp.qr_solve(As, y)
    coeffs = [xs[j] / scales[j] for j in range(A.cols)]
    return coeffs, smax / smin


def fit_expansion(samples, basis, ctx: PrecisionContext | None = None, *, weight_power: int = 4,
                  odd_probe: bool = True, odd_power: int = ODD_PROBE_POWER) -> ExpansionFit:
    """Weighted least squares of ``value(N) ~ sum_k e_k N^k`` over ``basis``.

    ``samples`` is ``[(N, value), ...]`` with distinct N and at least as many
    samples as basis functions (equality means interpolation).  With
    ``odd_probe`` and a spare sample, the fit is repeated with an
    ``N^odd_power`` term added and its coefficient reported.
    """
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    samples = [(int(N), v) for N, v in samples]
    basis = [int(k) for k in basis]
    Ns = [N for N, _ in samples]
    if len(set(Ns)) != len(Ns):
        raise ValueError("sample N values must be distinct")
    if len(set(basis)) != len(basis):
        raise ValueError("basis powers must be distinct")
    if len(samples) < len(basis):
        raise NumericalError(f"{len(samples)} samples cannot determine {len(basis)} coefficients")
    coeffs, cond = _weighted_lstsq(samples, basis, ctx, weight_power)
    residuals = [(N, ctx.mpf(v) - mp.fsum(c * mp.mpf(N) ** k for c, k in zip(coeffs, basis)))
                 for N, v in samples]
    probe = None
    if odd_probe and odd_power not in basis and len(samples) >= len(basis) + 1:
        aug = basis + [odd_power]
        pc, _ = _weighted_lstsq(samples, aug, ctx, weight_power)
        probe = pc[-1]
    return ExpansionFit(basis, coeffs, residuals, probe, cond, ctx)


def richardson(values, order: int, ctx: PrecisionContext | None = None, *, step: int = 2):
    """Eliminate the first ``order`` terms ``N^-step, N^-2step, ...``.

    ``values`` is ``[(N, value), ...]`` with N in geometric progression; the
    last ``order + 1`` entries are used.
    """
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    if order < 1:
        raise ValueError("order must be >= 1")
    values = sorted(((int(N), ctx.mpf(v)) for N, v in values), key=lambda nv: nv[0])
    if len(values) < order + 1:
        raise ValueError(f"order {order} needs {order + 1} values, got {len(values)}")
    values = values[-(order + 1):]
    Ns = [N for N, _ in values]
    q = Fraction(Ns[1], Ns[0])
    if q <= 1 or any(Fraction(Ns[i + 1], Ns[i]) != q for i in range(len(Ns) - 1)):
        raise ValueError(f"N values {Ns} are not in geometric progression")
    qm = ctx.mpf(q)
    col = [v for _, v in values]
    for k in range(1, order + 1):
        f = qm ** (step * k)
        col = [(f * col[i + 1] - col[i]) / (f - 1) for i in range(len(col) - 1)]
    return col[0]
