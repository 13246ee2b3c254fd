"""Baseline inversion by direct quadrature of the contour integral.

On the circle z = r e^{j theta},

    x[n] = 1/(2 pi) int_0^{2 pi} X(r e^{j theta}) r**n e^{j n theta} d theta,

which at r = 1 is the inverse Fourier transform of X(e^{jw}). The
integrand is smooth and periodic, so the composite trapezoidal rule is
used with successive doubling of the node count (32, 64, ...).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .core import (
    DEFAULT_QUAD_TOL,
    ConfigError,
    Method,
    NoConvergence,
    SignalEstimate,
    TransformEvaluator,
    evaluate_at,
)

BASE_NODES = 32


@dataclass(frozen=True)
class QuadratureSettings:
    radius: float = 1.0
    abs_tol: float = DEFAULT_QUAD_TOL
    max_refinements: int = 16

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigError("contour radius must be positive")
        if not self.abs_tol > 0:
            raise ConfigError("abs_tol must be positive")
        if self.max_refinements < 1:
            raise ConfigError("max_refinements must be >= 1")


def contour_integrand(X: TransformEvaluator, n: int, r: float, theta):
    """X(r e^{j theta}) r**n e^{j n theta}; the 1/(2 pi) is left to the integrator."""
    theta = np.asarray(theta, dtype=float)
    z = r * np.exp(1j * theta)
    out = evaluate_at(X, z) * r ** n * np.exp(1j * n * theta)
    return complex(out) if out.ndim == 0 else out


class _ContourNodes:
    """Trapezoid nodes and X values on one circle, refined by doubling.

    Level L holds BASE_NODES * 2**L equispaced nodes. The values of X do not
    depend on n, so they are computed once per level and reused for every n.
    """

    def __init__(self, X: TransformEvaluator, r: float):
        self.X = X
        self.r = r
        self._theta: List[np.ndarray] = []
        self._values: List[np.ndarray] = []

    def level(self, L: int) -> Tuple[np.ndarray, np.ndarray]:
        while len(self._theta) <= L:
            M = BASE_NODES * 2 ** len(self._theta)
            if not self._theta:
                theta = 2 * np.pi * np.arange(M) / M
                values = evaluate_at(self.X, self.r * np.exp(1j * theta))
            else:
                # new nodes are the midpoints of the previous level
                prev_t, prev_v = self._theta[-1], self._values[-1]
                mid = 2 * np.pi * (2 * np.arange(M // 2) + 1) / M
                mid_v = evaluate_at(self.X, self.r * np.exp(1j * mid))
                theta = np.empty(M)
                values = np.empty(M, dtype=complex)
                theta[0::2], theta[1::2] = prev_t, mid
                values[0::2], values[1::2] = prev_v, mid_v
            self._theta.append(theta)
            self._values.append(values)
        return self._theta[L], self._values[L]

    def trapezoid(self, n: int, L: int) -> complex:
        theta, values = self.level(L)
        M = len(theta)
        # e^{j n theta_k} with n*k reduced mod M keeps the phase exact for large n
        kernel = np.exp(2j * np.pi * ((n * np.arange(M)) % M) / M)
        return complex(np.mean(values * kernel) * self.r ** n)


def _integrate(nodes: _ContourNodes, n: int, settings: QuadratureSettings):
    prev = nodes.trapezoid(n, 0)
    delta = math.inf
    for L in range(1, settings.max_refinements + 1):
        cur = nodes.trapezoid(n, L)
        delta = abs(cur - prev)
        prev = cur
        if delta < settings.abs_tol:
            return cur, delta, L, True
    return prev, delta, settings.max_refinements, False


def integrate_contour(X: TransformEvaluator, n: int,
                      settings: QuadratureSettings = QuadratureSettings()) -> Tuple[float, float]:
    """x[n] as the real part of the contour integral; returns (value, est_error).

    Raises NoConvergence when successive estimates still differ by at least
    abs_tol after max_refinements doublings.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    value, delta, _, ok = _integrate(_ContourNodes(X, settings.radius), n, settings)
    if not ok:
        raise NoConvergence(f"x[{n}]: last refinement changed the estimate by {delta:.3g}")
    return value.real, delta


def invert_quad(X: TransformEvaluator, N: int,
                settings: QuadratureSettings = QuadratureSettings()) -> SignalEstimate:
    """Integrate x[0..N-1] one by one on the circle of radius settings.radius.

    Samples that fail to converge keep their last estimate and are listed in
    ``unconverged`` rather than aborting the run.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    nodes = _ContourNodes(X, settings.radius)
    values, errors, levels, failed = [], [], [], []
    for n in range(N):
        value, delta, L, ok = _integrate(nodes, n, settings)
        values.append(value)
        errors.append(delta)
        levels.append(L)
        if not ok:
            failed.append(n)
    values = np.array(values)
    return SignalEstimate(
        values.real, Method.QUAD,
        imag_leakage=float(np.max(np.abs(values.imag))),
        refinements=tuple(levels),
        est_errors=tuple(errors),
        unconverged=tuple(failed),
    )
