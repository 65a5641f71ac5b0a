"""Convergence of the normalized preimage measures nu_n for q^2 - 2.

Prints, for each depth n, the panel distance between nu_n(a) for two targets
and the distance to the closed-form arcsine limit on [-2, 2]; both decay
toward solver precision.

Usage: python scripts/brolin_convergence.py [--n-max 12] [--a 0.0] [--b 1.0]
"""

import argparse

import numpy as np

from qbrolin.measures import (brolin_pullback, measure_from_complex_atoms,
                              weak_distance)
from qbrolin.poly import QPolynomial


def arcsine_measure(n_atoms=4096):
    k = np.arange(n_atoms)
    x = 2.0 * np.cos((k + 0.5) * np.pi / n_atoms)
    return measure_from_complex_atoms(x.astype(complex),
                                      np.full(n_atoms, 1.0 / n_atoms),
                                      meta={"oracle": "arcsine"})


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--a", type=float, default=0.0)
    ap.add_argument("--b", type=float, default=1.0)
    args = ap.parse_args()
    p = QPolynomial.from_real([-2.0, 0.0, 1.0])
    oracle = arcsine_measure()
    print(f"{'n':>3} {'dist(nu_n(a), nu_n(b))':>24} {'dist(nu_n(a), arcsine)':>24}")
    for n in range(1, args.n_max + 1):
        nu_a = brolin_pullback(p, args.a, n)
        nu_b = brolin_pullback(p, args.b, n)
        print(f"{n:>3} {weak_distance(nu_a, nu_b):>24.3e} "
              f"{weak_distance(nu_a, oracle):>24.3e}")


if __name__ == "__main__":
    main()
