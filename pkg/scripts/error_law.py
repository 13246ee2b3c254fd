#!/usr/bin/env python3
"""Measured DFT aliasing error on 1/(1 - a z^-1) next to the dominant-pole prediction."""

import argparse

from ztinv.core import DominantPoleModel
from ztinv.invdft import invert_dft, predicted_aliasing_error
from ztinv.zexpr import Expression


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--poles", type=float, nargs="+", default=[0.5, 0.8, 0.9])
    parser.add_argument("--lengths", type=int, nargs="+", default=[16, 20, 32, 40, 64])
    parser.add_argument("--n", type=int, default=0)
    args = parser.parse_args()

    print("a,N,n,measured,predicted")
    for a in args.poles:
        X = Expression(f"1/(1-{a!r}*z^-1)")
        for N in args.lengths:
            x = invert_dft(X, N).samples
            measured = abs(x[args.n] - a ** args.n)
            predicted = predicted_aliasing_error(DominantPoleModel(1.0, a), args.n, N)
            print(f"{a},{N},{args.n},{measured:.6e},{predicted:.6e}")


if __name__ == "__main__":
    main()
