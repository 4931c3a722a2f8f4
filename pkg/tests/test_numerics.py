import pickle
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from laguerre_pf.numerics import (PrecisionContext, gauss_from_jacobi, polyval, quad_endpoint,
                                  quad_semiinfinite, required_digits, special, to_fraction)
from laguerre_pf.orthopoly import WeightSpec, recurrence_table
from laguerre_pf.potential import Potential


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(20)
    with pytest.raises(ValueError):
        PrecisionContext(40, quad_target="1e-36")


def test_context_pickles_without_cached_state(ctx):
    ctx.target  # populate cache
    clone = pickle.loads(pickle.dumps(ctx))
    assert clone == ctx and clone.target == ctx.target


def test_beta_integrals(ctx):
    mp = ctx.mp
    half = mp.mpf(1) / 2
    v = quad_endpoint(lambda x: 1, 0, 4, (half, -half), ctx)
    assert abs(v - 2 * mp.pi) < mp.mpf(10) ** -35
    v = quad_endpoint(lambda x: x, 0, 4, (half, -half), ctx)
    assert abs(v - 6 * mp.pi) < mp.mpf(10) ** -35
    assert abs(quad_endpoint(lambda x: 1, 0, 1, (0, 0), ctx) - 1) < mp.mpf(10) ** -35


@given(st.fractions(min_value=Fraction(-9, 10), max_value=2, max_denominator=10),
       st.fractions(min_value=Fraction(-9, 10), max_value=2, max_denominator=10))
def test_quad_endpoint_matches_beta_function(p, q):
    ctx = PrecisionContext(30)
    mp = ctx.mp
    v = quad_endpoint(lambda x: 1, 0, 1, (ctx.mpf(p), ctx.mpf(q)), ctx)
    exact = mp.beta(ctx.mpf(p) + 1, ctx.mpf(q) + 1)
    assert abs(v - exact) <= mp.mpf(10) ** -20 * exact


def test_semiinfinite_examples(ctx):
    mp = ctx.mp
    tol = ctx.target
    assert abs(quad_semiinfinite(lambda x: mp.exp(-x), 0, 1, ctx) - 1) < tol
    assert abs(quad_semiinfinite(lambda x: x * mp.exp(-2 * x), 0, 2, ctx) - mp.mpf(1) / 4) < tol
    v = quad_semiinfinite(lambda x: x ** mp.mpf(1.5) * mp.exp(-x), 0, 1, ctx)
    assert abs(v - 3 * mp.sqrt(mp.pi) / 4) < tol


@pytest.fixture(scope="module")
def laguerre_rec(ctx):
    return recurrence_table(WeightSpec(Potential(), 1), 12, ctx)


def test_gauss_two_point(ctx, laguerre_rec):
    mp = ctx.mp
    x, w = gauss_from_jacobi(laguerre_rec, 2, ctx)
    s = mp.sqrt(2)
    tol = mp.mpf(10) ** -35
    assert abs(x[0] - (2 - s)) < tol and abs(x[1] - (2 + s)) < tol
    assert abs(w[0] - (2 + s) / 4) < tol and abs(w[1] - (2 - s) / 4) < tol
    x, w = gauss_from_jacobi(laguerre_rec, 1, ctx)
    assert abs(x[0] - 1) < tol and abs(w[0] - 1) < tol


@given(st.integers(1, 12), st.lists(st.integers(-5, 5), min_size=1, max_size=24))
def test_gauss_exactness(n, coeffs):
    """An n-point rule integrates x^k e^-x (= k!) exactly for k < 2n."""
    ctx = PrecisionContext(40)
    mp = ctx.mp
    rec = recurrence_table(WeightSpec(Potential(), 1), 12, ctx)
    coeffs = coeffs[: 2 * n]
    x, w = gauss_from_jacobi(rec, n, ctx)
    assert abs(mp.fsum(w) - 1) < mp.mpf(10) ** -35
    got = mp.fsum(wi * polyval(coeffs, xi) for xi, wi in zip(x, w))
    exact = sum(c * mp.factorial(k) for k, c in enumerate(coeffs))
    assert abs(got - exact) <= mp.mpf(10) ** -30 * (1 + mp.factorial(len(coeffs)))


def test_special_values(ctx):
    mp = ctx.mp
    tol = mp.mpf(10) ** -35
    assert special("bessel_j0", 0, ctx) == 1
    assert special("bessel_i0", 0, ctx) == 1
    ai0 = mp.mpf(3) ** (-mp.mpf(2) / 3) / mp.gamma(mp.mpf(2) / 3)
    assert abs(special("airy_ai", 0, ctx) - ai0) < tol
    assert abs(special("airy_ai", 0, ctx) - mp.mpf("0.3550280538878172392600631860041831763980")) < tol
    assert abs(special("loggamma", 5, ctx) - mp.log(24)) < tol
    with pytest.raises(ValueError):
        special("bessel_k0", 0, ctx)
    with pytest.raises(ValueError):
        special("gamma", 1, ctx)


@given(st.floats(0.05, 30))
def test_bessel_identities(x):
    ctx = PrecisionContext(30)
    mp = ctx.mp
    x = ctx.mpf(x)
    # Wronskian I0 K0' - I0' K0 = -1/x
    wr = special("bessel_i0", x, ctx) * special("bessel_k0_prime", x, ctx) \
        - special("bessel_i0_prime", x, ctx) * special("bessel_k0", x, ctx)
    assert abs(wr + 1 / x) <= mp.mpf(10) ** -25 / x
    # J0'' + J0'/x + J0 = 0
    j0pp = mp.diff(lambda s: special("bessel_j0", s, ctx), x, 2)
    res = j0pp + special("bessel_j0_prime", x, ctx) / x + special("bessel_j0", x, ctx)
    assert abs(res) < mp.mpf(10) ** -20


def test_required_digits_grows():
    assert required_digits(1) == 30
    assert required_digits(40) >= 150
    assert required_digits(48) > required_digits(40)


@given(st.fractions(max_denominator=10**6))
def test_to_fraction_exact(q):
    ctx = PrecisionContext(40)
    v = ctx.mpf(q)
    assert ctx.mpf(to_fraction(v)) == v


def test_to_fraction_rejects_nonfinite(ctx):
    with pytest.raises(ValueError):
        to_fraction(ctx.mp.inf)


def test_context_bound_mpf(ctx):
    # values from a foreign context are re-rounded, not silently kept
    v = ctx.mpf(mpmath.mpf("0.1"))
    assert v.context is ctx.mp
