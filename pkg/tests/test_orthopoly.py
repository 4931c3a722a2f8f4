from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from laguerre_pf import PrecisionContext, Potential
from laguerre_pf.numerics import NumericalError, gauss_from_jacobi
from laguerre_pf.orthopoly import (RecurrenceTable, WeightSpec, eval_orthonormal, moments,
                                   orthonormal_functions, orthonormal_values, recurrence_from_moments,
                                   recurrence_table, stieltjes_recurrence)

QUAD = Potential((0, "0.1"))


def test_weight_spec_validation():
    with pytest.raises(ValueError):
        WeightSpec(Potential(), 0)


def test_closed_form_moments(ctx):
    assert abs(moments(WeightSpec(Potential(), 2), 2, ctx)[1] - ctx.mpf(1) / 4) < ctx.mp.mpf(10) ** -38
    assert moments(WeightSpec(Potential(), 1), 1, ctx)[0] == 1


def test_quadrature_moment_self_consistency():
    # the default target at 50 digits is 1e-40; ask for the tightest allowed
    lo = moments(WeightSpec(QUAD, 4), 1, PrecisionContext(50, quad_target="1e-45"))[0]
    hi = moments(WeightSpec(QUAD, 4), 1, PrecisionContext(100))[0]
    assert abs(lo - hi) < hi.context.mpf(10) ** -45


def test_laguerre_recurrence(ctx):
    mp = ctx.mp
    rec = recurrence_table(WeightSpec(Potential(), 1), 8, ctx)
    tol = mp.mpf(10) ** -30
    for n in range(9):
        assert abs(rec.a[n] - (2 * n + 1)) < tol
        assert abs(rec.norm2[n] - mp.factorial(n) ** 2) < tol * mp.factorial(n) ** 2
        if n:
            assert abs(rec.b[n] ** 2 - n * n) < tol
    assert abs(rec.gamma[2] - mp.mpf(1) / 2) < tol


def test_scaled_norms(ctx):
    mp = ctx.mp
    rec = recurrence_table(WeightSpec(Potential(), 2), 3, ctx)
    assert abs(rec.gamma[0] - mp.sqrt(2)) < mp.mpf(10) ** -35
    assert abs(rec.gamma[1] - 2 * mp.sqrt(2)) < mp.mpf(10) ** -35


def test_stieltjes_laguerre():
    ctx = PrecisionContext(60)
    mp = ctx.mp
    rec = stieltjes_recurrence(WeightSpec(Potential(), 1), 5, ctx)
    assert rec.route == "stieltjes"
    for n in range(6):
        assert abs(rec.a[n] - (2 * n + 1)) < mp.mpf(10) ** -30
        if n:
            assert abs(rec.b[n] - n) < mp.mpf(10) ** -30


def test_two_routes_agree():
    ctx = PrecisionContext(150)
    spec = WeightSpec(QUAD, 8)
    st_ = stieltjes_recurrence(spec, 8, ctx)
    hk = recurrence_table(spec, 8, ctx)
    tol = ctx.mp.mpf(10) ** -60
    assert all(v > 0 for v in st_.b[1:])
    for n in range(9):
        assert abs(st_.a[n] - hk.a[n]) < tol
        assert abs(st_.b[n] - hk.b[n]) < tol
        assert abs(st_.log_gamma[n] - hk.log_gamma[n]) < tol


def test_indefinite_moments_rejected(ctx):
    # sequence of a measure with two atoms: third pivot vanishes
    with pytest.raises(NumericalError):
        recurrence_from_moments([ctx.mpf(v) for v in (1, 0, 1, 0, 1, 0)], ctx, nmax=2)


def test_orthonormal_values(ctx):
    mp = ctx.mp
    rec = recurrence_table(WeightSpec(Potential(), 1), 10, ctx)
    assert abs(eval_orthonormal(rec, 0, 7) - 1) < mp.mpf(10) ** -35
    assert abs(eval_orthonormal(rec, 1, 1)) < mp.mpf(10) ** -35
    x, w = gauss_from_jacobi(rec, 10, ctx)
    assert abs(mp.fsum(wi * eval_orthonormal(rec, 2, xi) ** 2 for xi, wi in zip(x, w)) - 1) < mp.mpf(10) ** -30
    # the two evaluators agree
    p = orthonormal_values(rec, "2.5", 10)
    assert all(abs(p[n] - eval_orthonormal(rec, n, "2.5")) < mp.mpf(10) ** -30 for n in range(11))


def test_orthonormal_functions_fold_weight(ctx):
    mp = ctx.mp
    rec = recurrence_table(WeightSpec(QUAD, 6), 6, ctx)
    x = ctx.mpf("1.3")
    q = orthonormal_functions(rec, x, 6)
    p = orthonormal_values(rec, x, 6)
    sw = mp.sqrt(rec.spec.weight(x, ctx))
    assert all(abs(q[n] - sw * p[n]) < mp.mpf(10) ** -30 for n in range(7))
    with pytest.raises(ValueError):
        orthonormal_functions(rec, -1, 6)


def test_table_validation(ctx):
    one = ctx.mpf(1)
    with pytest.raises(ValueError):
        RecurrenceTable(None, 1, (one,), (0,), (one,), (one,), (0,), ctx)
    with pytest.raises(NumericalError):
        RecurrenceTable(None, 0, (one,), (0,), (-one,), (one,), (0,), ctx)


def test_csv_header(ctx):
    rec = recurrence_table(WeightSpec(Potential(), 1), 2, ctx)
    assert rec.to_csv().splitlines()[0] == "n,a,b,log_gamma"


@settings(max_examples=10)
@given(st.integers(1, 10), st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=20),
       st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(2)]))
def test_gauss_orthonormality(N, t2, alpha):
    """Gram matrix of p_0..p_{N-1} under an (N+1)-point rule is the identity."""
    ctx = auto_ctx = PrecisionContext(60)
    p = Potential((0, t2), alpha) if t2 else Potential((), alpha)
    rec = recurrence_table(WeightSpec(p, N), N, auto_ctx)
    mp = ctx.mp
    x, w = gauss_from_jacobi(rec, N + 1, ctx)
    vals = [orthonormal_values(rec, xi, N - 1) for xi in x]
    for i in range(N):
        for j in range(i + 1):
            g = mp.fsum(wk * v[i] * v[j] for wk, v in zip(w, vals))
            assert abs(g - (1 if i == j else 0)) < mp.mpf(10) ** -25
