"""Gap |M_{nu,b}(z) - M_{nu,inf}(z)| as b grows, for several orders.

    python3 scripts/convergence_study.py --z 1j --b-max 20
"""
import argparse
import math

import numpy as np

from besselweyl.weyl import convergence_table, strictly_decreasing


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--z", type=complex, default=1j)
    ap.add_argument("--b-max", type=float, default=20.0)
    ap.add_argument("--nus", type=float, nargs="+", default=[0.0, 0.3, 0.5, 0.8])
    args = ap.parse_args()
    # past b ~ 25 (z = i) the gap reaches the 1e-16 rounding floor and stops decreasing
    bs = np.linspace(2.0, args.b_max, 15)
    print("nu      b        gap        gap*exp(Im sqrt(z) 2b)")
    rate = 2 * (np.sqrt(args.z)).imag
    for nu in args.nus:
        rows = convergence_table(nu, args.z, bs)
        for r in rows:
            scaled = r.gap * math.exp(rate * r.b) if not r.flagged else math.nan
            print(f"{nu:<7g} {r.b:<8.3g} {r.gap:<10.3e} {scaled:.3g}")
        print(f"# nu={nu}: strictly decreasing = {strictly_decreasing(rows)}")


if __name__ == "__main__":
    main()
