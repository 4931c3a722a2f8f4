#!/usr/bin/env python3
"""Large-zeta behaviour of F0: remainder constants, period averages, truncation errors."""

from laguerre_pf import F0_eval, F0_expansion, PrecisionContext
from laguerre_pf.kernels import F0_MAX_TERMS, F0_period_average, F0_remainder_constant

ctx = PrecisionContext(30)
mp = ctx.mp
c0 = 2 / mp.pi

print(f"{'zeta':>6} {'C(zeta)':>10} {'avg F0/sqrt':>14} {'avg - 2/pi':>11}")
for z in (5, 10, 20, 40, 80, 160):
    C = F0_remainder_constant(z, ctx)
    avg = F0_period_average(z, ctx)
    print(f"{z:6d} {mp.nstr(C, 6):>10} {mp.nstr(avg, 10):>14} {mp.nstr(avg - c0, 3):>11}")

print("\n|F0 - expansion(terms)| / zeta^(1/2)")
print(f"{'zeta':>6} " + " ".join(f"{'terms=' + str(k):>11}" for k in range(1, F0_MAX_TERMS + 1)))
for z in (10, 20, 40, 80):
    errs = [abs(F0_eval(z, ctx) - F0_expansion(z, k, ctx)) / mp.sqrt(z) for k in range(1, F0_MAX_TERMS + 1)]
    print(f"{z:6d} " + " ".join(f"{mp.nstr(e, 3):>11}" for e in errs))
