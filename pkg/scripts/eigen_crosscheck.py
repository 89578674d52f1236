"""Secular eigenvalues against the shooting and finite-difference oracles.

    python3 scripts/eigen_crosscheck.py --k 6
"""
import argparse
import math

from besselweyl.extensions import eigenvalues, krein_parameter
from besselweyl.oracle import fd_eigenvalues, oracle_eigenvalues


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=6)
    ap.add_argument("--fd-delta", type=float, default=1e-4)
    args = ap.parse_args()
    print("nu    b      h          max rel diff (shooting)   lambda_1")
    for nu in (0.0, 0.25, 0.5, 0.75):
        for b in (1.0, math.pi):
            for h in ("friedrichs", "krein", -3.0, 1.0):
                hv = math.inf if h == "friedrichs" else krein_parameter(nu, b) if h == "krein" else h
                sec = eigenvalues(nu, b, hv, args.k).eigenvalues
                sho = oracle_eigenvalues(nu, b, "friedrichs" if h == "friedrichs" else hv, args.k).eigenvalues
                diff = max(abs(a - c) / max(1.0, abs(c)) for a, c in zip(sec, sho))
                print(f"{nu:<5g} {b:<6.4g} {str(h):<10} {diff:<25.2e} {sec[0]:.12g}")
    # truncation oracle: Dirichlet at x = delta approximates Friedrichs with error O(delta^(2 nu))
    print("\nFD truncation (Friedrichs, b = 1):")
    for nu in (0.25, 0.5, 0.75):
        sec = eigenvalues(nu, 1.0, math.inf, 1).eigenvalues[0]
        fd = fd_eigenvalues(nu, 1.0, args.fd_delta, 1).eigenvalues[0]
        print(f"nu={nu}: secular {sec:.10f}  fd {fd:.10f}  rel diff {abs(fd - sec) / sec:.2e}")


if __name__ == "__main__":
    main()
