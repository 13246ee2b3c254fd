#!/usr/bin/env python3
"""Contour-quadrature error against the series oracle for several radii."""

import argparse

import numpy as np

from ztinv.invquad import QuadratureSettings, invert_quad
from ztinv.series_oracle import oracle_from_ast
from ztinv.zexpr import Expression


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--expr", default="exp(1/z)*sin(1/z)")
    parser.add_argument("--N", type=int, default=21)
    parser.add_argument("--radii", type=float, nargs="+", default=[0.8, 1.0, 1.2])
    parser.add_argument("--tol", type=float, default=1e-10)
    args = parser.parse_args()

    X = Expression(args.expr)
    truth = oracle_from_ast(X.ast, max(args.N, 64)).coeffs[: args.N]
    print("radius,max_abs_error,max_refinements")
    for r in args.radii:
        est = invert_quad(X, args.N, QuadratureSettings(radius=r, abs_tol=args.tol))
        err = np.max(np.abs(est.samples - truth))
        print(f"{r},{err:.3e},{max(est.refinements)}")


if __name__ == "__main__":
    main()
