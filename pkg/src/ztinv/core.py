"""Shared types, errors and the pole-scaling helpers used by every method.

Complex values are plain Python ``complex`` / ``numpy.complex128``; a
transform is any callable mapping a complex point to a complex value.
Callables that advertise ``vectorized = True`` are handed whole numpy
arrays of points at once.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

ComplexLike = Union[complex, np.ndarray]
TransformEvaluator = Callable[[ComplexLike], ComplexLike]

DEFAULT_ANNULUS = (1.05, 2.0)
DEFAULT_QUAD_TOL = 1e-10
DEFAULT_SEED = 42


class ZtinvError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(ZtinvError, ValueError):
    pass


class EvalError(ZtinvError, ArithmeticError):
    """X(z) could not be evaluated (singularity, log(0), overflow...)."""


class RankDeficient(ZtinvError, np.linalg.LinAlgError):
    pass


class NoConvergence(ZtinvError, RuntimeError):
    pass


class ScalingOverflow(ZtinvError, OverflowError):
    """Undoing the pole scaling left the range of doubles."""


class Method(str, enum.Enum):
    LSQ = "lsq"
    DFT = "dft"
    QUAD = "quad"


def default_point_count(n_samples: int) -> int:
    # ~10% more points than unknowns; integer arithmetic avoids 1.1*k rounding up
    return -(-11 * (n_samples + 1) // 10)


@dataclass(frozen=True)
class InversionConfig:
    n_samples: int
    point_count: Optional[int] = None
    annulus_min: float = DEFAULT_ANNULUS[0]
    annulus_max: float = DEFAULT_ANNULUS[1]
    contour_radius: float = 1.0
    quad_tol: float = DEFAULT_QUAD_TOL
    rng_seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.n_samples < 1:
            raise ConfigError(f"N must be >= 1, got {self.n_samples}")
        if self.point_count is None:
            object.__setattr__(self, "point_count", default_point_count(self.n_samples))
        elif self.point_count < 1:
            raise ConfigError(f"m must be >= 1, got {self.point_count}")
        if not self.annulus_min > 1.0:
            raise ConfigError(
                f"annulus_min must exceed 1 (points on or inside the unit circle "
                f"make the system ill-conditioned), got {self.annulus_min}")
        if not self.annulus_max > self.annulus_min:
            raise ConfigError("annulus_max must exceed annulus_min")
        if not self.contour_radius > 0:
            raise ConfigError("contour radius must be positive")
        if not self.quad_tol > 0:
            raise ConfigError("quadrature tolerance must be positive")
        if self.rng_seed < 0:
            raise ConfigError("seed must be a nonnegative integer")


@dataclass(frozen=True)
class SignalEstimate:
    """Recovered samples x~[0..N-1] plus method diagnostics.

    ``refinements`` and ``est_errors`` are per-sample and only filled by the
    quadrature method; ``unconverged`` lists samples whose quadrature hit the
    refinement cap.
    """

    samples: np.ndarray
    method: Method
    residual_norm: Optional[float] = None
    imag_leakage: Optional[float] = None
    condition_estimate: Optional[float] = None
    refinements: Optional[tuple] = None
    est_errors: Optional[tuple] = None
    unconverged: tuple = field(default_factory=tuple)

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        for name in ("residual_norm", "imag_leakage"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be nonnegative")

    def __len__(self):
        return len(self.samples)


@dataclass(frozen=True)
class DominantPoleModel:
    """Asymptotic model x[n] ~ amplitude * pole**n of the outermost simple pole."""

    amplitude: float
    pole: float

    def __post_init__(self):
        if not abs(self.pole) < 1:
            raise ConfigError(f"dominant pole must satisfy |a| < 1, got {self.pole}")


def evaluate_at(X: TransformEvaluator, points) -> np.ndarray:
    """Evaluate ``X`` at every point, vectorized when ``X`` supports it."""
    points = np.asarray(points, dtype=complex)
    if getattr(X, "vectorized", False):
        values = np.asarray(X(points), dtype=complex)
        if values.shape != points.shape:
            values = np.broadcast_to(values, points.shape).copy()
    else:
        values = np.array([complex(X(complex(p))) for p in points.ravel()],
                          dtype=complex).reshape(points.shape)
    return values


def _check_scale(a: float):
    if a == 0 or not abs(a) < 1:
        raise ConfigError(f"scale factor must satisfy 0 < |a| < 1, got {a}")


class ScaledTransform:
    """Y(z) = X(z / a), the transform of a**n * x[n]."""

    def __init__(self, X: TransformEvaluator, a: float):
        _check_scale(a)
        self.inner = X
        self.a = a
        self.vectorized = getattr(X, "vectorized", False)

    def __call__(self, z):
        return self.inner(z / self.a)

    def __repr__(self):
        return f"ScaledTransform({self.inner!r}, a={self.a!r})"


def scale_transform(X: TransformEvaluator, a: float) -> ScaledTransform:
    """Move every pole of X from p to a*p, so |a| < 1 pulls them inward."""
    return ScaledTransform(X, a)


def unscale_signal(y: Sequence[float], a: float) -> np.ndarray:
    """Undo :func:`scale_transform` on a recovered signal: x[n] = a**-n * y[n].

    Raises :class:`ScalingOverflow` when some a**-n * |y[n]| is not
    representable, which means N is too large for this scale factor.
    """
    if a == 0:
        raise ConfigError("scale factor must be nonzero")
    y = np.asarray(y, dtype=float)
    n = np.arange(len(y))
    log_gain = -n * math.log(abs(a))
    with np.errstate(divide="ignore"):
        log_mag = log_gain + np.log(np.abs(y))
    too_big = log_mag > math.log(np.finfo(float).max)
    if np.any(too_big):
        first = int(np.argmax(too_big))
        raise ScalingOverflow(
            f"a**-n * |y[n]| overflows at n={first} for a={a}; reduce N or use a "
            f"scale factor closer to 1")
    with np.errstate(over="ignore"):
        gain = np.float_power(float(a), -n.astype(float))
    x = np.zeros_like(y)
    fine = np.isfinite(gain) & (y != 0)
    x[fine] = y[fine] * gain[fine]
    # gain alone overflowed but the product is representable
    huge = ~np.isfinite(gain) & (y != 0)
    x[huge] = np.sign(y[huge]) * np.sign(a) ** n[huge] * np.exp(log_mag[huge])
    return x
