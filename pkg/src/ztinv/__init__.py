"""Numerical inversion of the Z-transform."""

from .core import (
    ConfigError,
    DominantPoleModel,
    EvalError,
    InversionConfig,
    Method,
    NoConvergence,
    RankDeficient,
    ScalingOverflow,
    SignalEstimate,
    ZtinvError,
    scale_transform,
    unscale_signal,
)
from .zexpr import Expression, parse

__version__ = "0.1.0"
