"""Inversion by least squares on random samples of X(z) outside the unit circle.

Truncating X(z) = sum x[n] z**-n after N+1 terms and sampling it at m
points gives an m x (N+1) Vandermonde system A x ~= X, with A[i, k] =
z_i**-k. Real and imaginary parts are stacked so the solution is real, and
the system is solved through a Householder QR factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import (
    ConfigError,
    InversionConfig,
    Method,
    RankDeficient,
    SignalEstimate,
    TransformEvaluator,
    evaluate_at,
)

RANK_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class SamplePointSet:
    points: np.ndarray
    seed: int
    annulus: Tuple[float, float]

    def __len__(self):
        return len(self.points)


def draw_sample_points(m: int, r_min: float, r_max: float, seed: int,
                       enforce_exterior: bool = True) -> SamplePointSet:
    """m points with uniform angle on [0, 2pi) and uniform radius on [r_min, r_max].

    ``enforce_exterior=False`` skips the r_min > 1 check; it exists only so
    the ill-conditioning of interior points can be demonstrated.
    """
    if m < 0:
        raise ConfigError("m must be nonnegative")
    if enforce_exterior and not r_min > 1:
        raise ConfigError(f"sample radii must exceed 1, got r_min={r_min}")
    if not r_max > r_min:
        raise ConfigError("r_max must exceed r_min")
    rng = np.random.default_rng(seed)
    radius = rng.uniform(r_min, r_max, size=m)
    angle = rng.uniform(0.0, 2 * np.pi, size=m)
    pts = radius * np.exp(1j * angle)
    pts.flags.writeable = False
    return SamplePointSet(pts, seed, (r_min, r_max))


def build_design_matrix(points, N: int) -> np.ndarray:
    """A[i, k] = points[i] ** -k for k = 0..N."""
    if isinstance(points, SamplePointSet):
        points = points.points
    w = 1 / np.asarray(points, dtype=complex)
    if w.size == 0:
        raise ValueError("need at least one sample point")
    A = np.empty((w.size, N + 1), dtype=complex)
    A[:, 0] = 1
    for k in range(1, N + 1):
        A[:, k] = A[:, k - 1] * w
    return A


def householder_qr(A: np.ndarray):
    """Factor real A (m >= n) as Q R; returns reflectors V and upper-triangular R."""
    R = np.array(A, dtype=float)
    m, n = R.shape
    vs = []
    for j in range(n):
        x = R[j:, j]
        normx = np.linalg.norm(x)
        v = x.copy()
        if normx == 0.0:
            vs.append(None)
            continue
        v[0] += np.copysign(normx, x[0])
        v /= np.linalg.norm(v)
        R[j:, j:] -= 2.0 * np.outer(v, v @ R[j:, j:])
        vs.append(v)
    return vs, np.triu(R[:n, :])


def _apply_qt(vs, b: np.ndarray) -> np.ndarray:
    b = np.array(b, dtype=float)
    for j, v in enumerate(vs):
        if v is not None:
            b[j:] -= 2.0 * v * (v @ b[j:])
    return b


def _back_substitute(R: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = R.shape[1]
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - R[i, i + 1:] @ x[i + 1:]) / R[i, i]
    return x


def stack_real(A: np.ndarray, X: np.ndarray):
    return np.vstack([A.real, A.imag]), np.concatenate([X.real, X.imag])


def condition_estimate(A: np.ndarray) -> float:
    """2-norm condition number of the stacked real form of A."""
    vs, R = householder_qr(stack_real(A, np.zeros(A.shape[0], dtype=complex))[0])
    s = np.linalg.svd(R, compute_uv=False)
    return float(s[0] / s[-1]) if s[-1] > 0 else float("inf")


def solve_least_squares(A: np.ndarray, X) -> Tuple[np.ndarray, float, float]:
    """Real x minimizing ||[Re A; Im A] x - [Re X; Im X]||_2.

    Returns (x, residual_norm, condition_estimate). Raises RankDeficient
    when a diagonal entry of R falls below RANK_RTOL times the largest.
    """
    X = np.asarray(X, dtype=complex)
    m, n = A.shape
    if m < n:
        raise ConfigError(f"need m >= N+1 points, got m={m} for {n} unknowns")
    S, b = stack_real(A, X)
    vs, R = householder_qr(S)
    diag = np.abs(np.diag(R))
    if diag.max() == 0 or np.any(diag < RANK_RTOL * diag.max()):
        rank = int(np.sum(diag >= RANK_RTOL * diag.max()))
        raise RankDeficient(f"numerical rank {rank} < {n}: choose other points or a smaller N")
    y = _apply_qt(vs, b)
    x = _back_substitute(R, y[:n])
    residual = float(np.linalg.norm(y[n:]))
    s = np.linalg.svd(R, compute_uv=False)
    return x, residual, float(s[0] / s[-1])


def invert_lsq(X: TransformEvaluator, config: InversionConfig) -> SignalEstimate:
    """Recover x[0..N-1] by a least-squares fit of N+1 unknowns to m samples of X."""
    N, m = config.n_samples, config.point_count
    if m < N + 1:
        raise ConfigError(f"least squares needs m >= N+1, got m={m}, N={N}")
    pts = draw_sample_points(m, config.annulus_min, config.annulus_max, config.rng_seed)
    values = evaluate_at(X, pts.points)
    A = build_design_matrix(pts, N)
    x, residual, cond = solve_least_squares(A, values)
    return SignalEstimate(x[:N], Method.LSQ, residual_norm=residual, condition_estimate=cond)
