#!/usr/bin/env python3
"""Relative deviation of the hard- and soft-edge approximations from rho_N at t = 0.

Prints the deviation, the N -> 2N ratio, and N^k-scaled deviations for
k = 1, 2 so the order of the error can be read off directly.
"""

import argparse

from laguerre_pf import EdgeMaps, PrecisionContext, Potential, hard_edge_density, soft_edge_density
from laguerre_pf import solve_equilibrium
from laguerre_pf.correlation import rho_cd
from laguerre_pf.numerics import auto_context
from laguerre_pf.orthopoly import WeightSpec, recurrence_table


def scan(name, fn, xs, Ns, eq, ctx):
    mp = ctx.mp
    tables = {N: recurrence_table(WeightSpec(eq.potential, N), N, auto_context(N, ctx)) for N in Ns}
    print(f"\n{name}")
    print(f"{'x':>6} {'N':>4} {'rel dev':>12} {'ratio':>7} {'N*dev':>10} {'N^2*dev':>10}")
    for x in xs:
        prev = None
        for N in Ns:
            exact = rho_cd(tables[N], x)
            d = (fn(EdgeMaps(eq, N), x) - exact) / exact
            ratio = f"{float(abs(d) / abs(prev)):7.3f}" if prev is not None else " " * 7
            print(f"{x:>6} {N:4d} {mp.nstr(d, 4):>12} {ratio} {float(N * d):10.2e} {float(N * N * d):10.2e}")
            prev = d


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n-list", default="10,20,40,80")
    ap.add_argument("--digits", type=int, default=30)
    args = ap.parse_args()
    ctx = PrecisionContext(args.digits)
    Ns = [int(v) for v in args.n_list.split(",")]
    eq = solve_equilibrium(Potential(), ctx)
    scan("hard edge (S = I)", hard_edge_density, ["0.02", "0.05", "0.1", "0.3"], Ns, eq, ctx)
    scan("soft edge (Airy)", soft_edge_density, ["3.8", "3.9", "3.95", "4", "4.1"], Ns, eq, ctx)


if __name__ == "__main__":
    main()
