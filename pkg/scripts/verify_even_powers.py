#!/usr/bin/env python3
"""Sweep log(Z_N(t)/Z_N(0)) over N, fit in powers of N, compare e0 with both oracles.

Also refits with an N^1 column (odd probe) and a basis containing odd powers
throughout, so the size of the spurious odd coefficients can be read off.

    python scripts/verify_even_powers.py --potential "t=0,0.1" --n-list 8,12,16,24,32,48
"""

import argparse
import time

from laguerre_pf import PrecisionContext, log_ratio_sweep, parse_potential
from laguerre_pf.asymptotics import e0_energy, e0_path_oracle, fit_expansion, richardson


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--potential", default="t=0,0.1")
    ap.add_argument("--n-list", default="8,12,16,24,32,48")
    ap.add_argument("--digits", type=int, default=40)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--skip-path-oracle", action="store_true", help="energy oracle only (fast)")
    args = ap.parse_args()

    p = parse_potential(args.potential)
    ctx = PrecisionContext(args.digits)
    mp = ctx.mp
    Ns = [int(v) for v in args.n_list.split(",")]

    t0 = time.perf_counter()
    table = log_ratio_sweep(p, Ns, ctx, workers=args.workers)
    print(f"sweep over N={Ns}: {time.perf_counter() - t0:.1f}s")
    for r in table.rows:
        print(f"  N={r.N:3d} digits={r.digits:3d} log_ratio={mp.nstr(r.log_ratio, 25)} agreement={mp.nstr(r.agreement, 3)}")
    samples = [(r.N, ctx.mpf(r.log_ratio)) for r in table.rows]

    even = fit_expansion(samples, [2, 0, -2, -4], ctx)
    print("\neven basis {2, 0, -2, -4}")
    print(even.report(), end="")

    if len(samples) >= 6:
        mixed = fit_expansion(samples, [2, 1, 0, -1, -2], ctx, odd_probe=False)
        print("\nmixed basis {2, 1, 0, -1, -2}: odd coefficients",
              mp.nstr(mixed.coefficient(1), 5), mp.nstr(mixed.coefficient(-1), 5))

    e0_e = e0_energy(p, ctx)
    print(f"\ne0 (energy oracle) = {mp.nstr(e0_e, 25)}")
    if not args.skip_path_oracle:
        t0 = time.perf_counter()
        e0_p = e0_path_oracle(p, ctx)
        print(f"e0 (path oracle)   = {mp.nstr(e0_p, 25)}  [{time.perf_counter() - t0:.1f}s]")
        print(f"oracle difference  = {mp.nstr(e0_p - e0_e, 3)}")
    rel = abs(even.coefficient(2) - e0_e) / abs(e0_e) if e0_e else abs(even.coefficient(2))
    print(f"fit relative error = {mp.nstr(rel, 3)}")

    # Richardson on log_ratio/N^2 over the doubling subsequence
    chain = [(N, v / N ** 2) for N, v in samples if N in (8, 16, 32)]
    if len(chain) == 3:
        print(f"richardson(8,16,32; order 2) on log_ratio/N^2 = {mp.nstr(richardson(chain, 2, ctx), 15)}")

    # e2 stability as the smallest N are dropped (diagnostic only)
    for k in range(0, len(samples) - 4):
        sub = samples[k:]
        fit = fit_expansion(sub, [2, 0, -2, -4], ctx, odd_probe=False)
        print(f"e2 from N>={sub[0][0]:3d}: {mp.nstr(fit.coefficient(-2), 10)}")

    pairs = [(N, 2 * N) for N in Ns if 2 * N in Ns]
    for (a, b), v in even.remainder_ratios(samples, pairs).items():
        print(f"r({a})/r({b}) = {mp.nstr(v, 6)}   (even structure predicts 4)")


if __name__ == "__main__":
    main()
