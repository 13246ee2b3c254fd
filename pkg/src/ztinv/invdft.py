"""Inversion by sampling X on the unit circle and taking an inverse DFT.

The IDFT of N uniform samples of X(e^{jw}) is the N-periodic aliased
signal x~[n] = x[n] + x[n+N] + x[n+2N] + ..., so x~ approximates x when x
decays. For a simple dominant pole a, the aliasing error of sample n is
about A a**(n+N) / (1 - a**N).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .core import (
    DominantPoleModel,
    EvalError,
    Method,
    SignalEstimate,
    TransformEvaluator,
    evaluate_at,
)

log = logging.getLogger(__name__)

DEFAULT_N = 1024
POLE_MAGNITUDE = 1e12
LEAKAGE_WARN = 1e-6
SCALING_HINT = ("X(z) appears to have a pole on or outside the unit circle; "
                "try pole scaling (--scale a with 0 < |a| < 1)")


@dataclass(frozen=True, eq=False)
class SpectrumSamples:
    """values[k] = X(exp(2j*pi*k/N)) for k = 0..N-1."""

    values: np.ndarray

    @property
    def N(self) -> int:
        return len(self.values)


def unit_circle_points(N: int) -> np.ndarray:
    k = np.arange(N)
    return np.exp(2j * np.pi * k / N)


def sample_unit_circle(X: TransformEvaluator, N: int) -> SpectrumSamples:
    if N < 1:
        raise ValueError("N must be >= 1")
    pts = unit_circle_points(N)
    try:
        values = evaluate_at(X, pts)
    except (EvalError, ZeroDivisionError, OverflowError) as exc:
        raise EvalError(f"cannot sample X on the unit circle ({exc}). {SCALING_HINT}") from exc
    bad = ~np.isfinite(values) | (np.abs(values) > POLE_MAGNITUDE)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise EvalError(f"|X| is huge or non-finite at k={k}. {SCALING_HINT}")
    values.flags.writeable = False
    return SpectrumSamples(values)


def _fft_radix2(x: np.ndarray, sign: int) -> np.ndarray:
    """Iterative decimation-in-time FFT, sum_k x[k] exp(sign*2j*pi*k*n/N)."""
    N = len(x)
    bits = N.bit_length() - 1
    idx = np.arange(N)
    rev = np.zeros(N, dtype=int)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    a = np.asarray(x, dtype=complex)[rev]
    size = 2
    while size <= N:
        half = size // 2
        tw = np.exp(sign * 2j * np.pi * np.arange(half) / size)
        a = a.reshape(-1, size)
        even = a[:, :half].copy()
        odd = a[:, half:] * tw
        a[:, :half] = even + odd
        a[:, half:] = even - odd
        a = a.reshape(N)
        size *= 2
    return a


def _dft_direct(x: np.ndarray, sign: int) -> np.ndarray:
    N = len(x)
    n = np.arange(N)
    # reduce k*n mod N before scaling so the phase stays accurate for large N
    phase = np.outer(n, n) % N
    return np.exp(sign * 2j * np.pi * phase / N) @ np.asarray(x, dtype=complex)


def dft(x, sign: int = -1) -> np.ndarray:
    """Unnormalized DFT with kernel exp(sign*2j*pi*k*n/N)."""
    x = np.asarray(x, dtype=complex)
    N = len(x)
    if N & (N - 1) == 0 and N > 0:
        return _fft_radix2(x, sign)
    return _dft_direct(x, sign)


def inverse_dft(samples) -> np.ndarray:
    """out[n] = (1/N) sum_k samples[k] exp(2j*pi*k*n/N)."""
    if isinstance(samples, SpectrumSamples):
        samples = samples.values
    samples = np.asarray(samples, dtype=complex)
    return dft(samples, sign=+1) / len(samples)


def invert_dft(X: TransformEvaluator, N: int = DEFAULT_N) -> SignalEstimate:
    x = inverse_dft(sample_unit_circle(X, N))
    leakage = float(np.max(np.abs(x.imag)))
    scale = float(np.max(np.abs(x.real)))
    if leakage > LEAKAGE_WARN * scale:
        log.warning("imaginary leakage %.3g exceeds %.0e of max|x~| (%.3g); "
                    "is x[n] real?", leakage, LEAKAGE_WARN, scale)
    return SignalEstimate(x.real, Method.DFT, imag_leakage=leakage)


def predicted_aliasing_error(model: DominantPoleModel, n: int, N: int) -> float:
    """|A a**(n+N) / (1 - a**N)|, the aliasing error of sample n of an N-point IDFT."""
    if n < 0 or N < 1:
        raise ValueError("need n >= 0 and N >= 1")
    a = model.pole
    return abs(model.amplitude * a ** (n + N) / (1 - a ** N))
