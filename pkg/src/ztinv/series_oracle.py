"""Truncated power series in w = 1/z, used as an independent ground truth.

For a causal signal, X(z) = sum_n x[n] w**n, so the coefficients of the
series expansion of X in w are the samples x[n] themselves. Nothing here
touches the numerical inversion methods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import ZtinvError
from .zexpr import Binary, Call, ExprAst, Unary, VariableZ, contains_z, evaluate, parse

DEFAULT_ORDER = 64


class UnsupportedForOracle(ZtinvError, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """c[0] + c[1] w + ... + c[K] w**K + O(w**(K+1))."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or len(c) < 1:
            raise ValueError("coefficients must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value: float, order: int) -> "TruncatedSeries":
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def monomial(cls, power: int, order: int, scale: float = 1.0) -> "TruncatedSeries":
        c = np.zeros(order + 1)
        if power <= order:
            c[power] = scale
        return cls(c)

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and np.array_equal(self.coeffs, other.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __add__(self, other):
        return series_arith("add", self, other)

    def __sub__(self, other):
        return series_arith("sub", self, other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_arith("mul", self, other)
        return series_arith("scale", self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return series_arith("scale", self, -1.0)

    def __truediv__(self, other):
        return series_arith("div", self, other)

    def __call__(self, z):
        """Sum the truncated series at z (i.e. at w = 1/z), Horner style."""
        w = 1 / np.asarray(z, dtype=complex)
        acc = np.zeros_like(w)
        for c in self.coeffs[::-1]:
            acc = acc * w + c
        return acc


def _cauchy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: len(a)]


def reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """1/a via b[0] = 1/a[0], b[n] = -(sum_{k=1..n} a[k] b[n-k]) / a[0]."""
    c = a.coeffs
    if c[0] == 0:
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    b = np.zeros_like(c)
    b[0] = 1.0 / c[0]
    for n in range(1, len(c)):
        b[n] = -np.dot(c[1: n + 1], b[n - 1:: -1][:n]) / c[0]
    return TruncatedSeries(b)


def series_arith(op: str, a: TruncatedSeries, b: Union[TruncatedSeries, float]) -> TruncatedSeries:
    """add/sub/mul/div of two series of equal order, or scale by a scalar."""
    if op == "scale":
        return TruncatedSeries(a.coeffs * float(b))
    if not isinstance(b, TruncatedSeries):
        b = TruncatedSeries.constant(float(b), a.order)
    if a.order != b.order:
        raise ValueError(f"truncation orders differ: {a.order} vs {b.order}")
    if op == "add":
        return TruncatedSeries(a.coeffs + b.coeffs)
    if op == "sub":
        return TruncatedSeries(a.coeffs - b.coeffs)
    if op == "mul":
        return TruncatedSeries(_cauchy(a.coeffs, b.coeffs))
    if op == "div":
        return TruncatedSeries(_cauchy(a.coeffs, reciprocal(b).coeffs))
    raise ValueError(f"unknown series operation {op!r}")


def series_compose_elementary(func: str, a: TruncatedSeries) -> TruncatedSeries:
    """exp, sin or cos of a series.

    Uses b' = a' b for exp and the coupled pair s' = a' c, c' = -a' s, written
    as n b[n] = sum_{k=1..n} k a[k] b[n-k].
    """
    c = a.coeffs
    K = len(c) - 1
    ka = np.arange(K + 1) * c
    if func == "exp":
        b = np.zeros(K + 1)
        b[0] = math.exp(c[0])
        for n in range(1, K + 1):
            b[n] = np.dot(ka[1: n + 1], b[n - 1:: -1][:n]) / n
        return TruncatedSeries(b)
    if func in ("sin", "cos"):
        s = np.zeros(K + 1)
        co = np.zeros(K + 1)
        s[0], co[0] = math.sin(c[0]), math.cos(c[0])
        for n in range(1, K + 1):
            s[n] = np.dot(ka[1: n + 1], co[n - 1:: -1][:n]) / n
            co[n] = -np.dot(ka[1: n + 1], s[n - 1:: -1][:n]) / n
        return TruncatedSeries(s if func == "sin" else co)
    raise ValueError(f"no series composition for {func!r}")


def _power(base: TruncatedSeries, k: int) -> TruncatedSeries:
    if k < 0:
        return _power(reciprocal(base), -k)
    out = TruncatedSeries.constant(1.0, base.order)
    sq = base
    while k:
        if k & 1:
            out = out * sq
        k >>= 1
        if k:
            sq = sq * sq
    return out


def _real_constant(node: ExprAst) -> float:
    value = evaluate(node, 0j)
    if value.imag != 0:
        raise UnsupportedForOracle(f"complex constant {value} in expression")
    return value.real


def _z_power(node: ExprAst):
    """Return p if node is z**p for a constant integer p (z itself is p = 1)."""
    if isinstance(node, VariableZ):
        return 1
    if isinstance(node, Binary) and node.op == "^" and isinstance(node.left, VariableZ) \
            and not contains_z(node.right):
        p = _real_constant(node.right)
        if not float(p).is_integer():
            raise UnsupportedForOracle("non-integer power of z")
        return int(p)
    return None


def _series(node: ExprAst, K: int) -> TruncatedSeries:
    if not contains_z(node):
        return TruncatedSeries.constant(_real_constant(node), K)
    p = _z_power(node)
    if p is not None:
        if p > 0:
            raise UnsupportedForOracle("positive power of z (signal would be non-causal)")
        return TruncatedSeries.monomial(-p, K)
    if isinstance(node, Unary):
        child = _series(node.child, K)
        return -child if node.op == "-" else child
    if isinstance(node, Call):
        if node.func not in ("exp", "sin", "cos"):
            raise UnsupportedForOracle(f"{node.func}() of a z-dependent argument")
        return series_compose_elementary(node.func, _series(node.arg, K))
    op = node.op
    if op == "/":
        q = _z_power(node.right)
        if q is not None and q > 0:
            # a / z**q is a shift by q powers of w
            num = _series(node.left, K).coeffs
            shifted = np.zeros(K + 1)
            if q <= K:
                shifted[q:] = num[: K + 1 - q]
            return TruncatedSeries(shifted)
        den = _series(node.right, K)
        if den.coeffs[0] == 0:
            raise UnsupportedForOracle("denominator vanishes as z -> infinity")
        return _series(node.left, K) / den
    if op == "^":
        if contains_z(node.right):
            if contains_z(node.left):
                raise UnsupportedForOracle("z-dependent base and exponent")
            base = _real_constant(node.left)
            if base <= 0:
                raise UnsupportedForOracle("constant base of a z-dependent power must be positive")
            return series_compose_elementary("exp", _series(node.right, K) * math.log(base))
        k = _real_constant(node.right)
        if not float(k).is_integer():
            raise UnsupportedForOracle("non-integer power of a z-dependent expression")
        base = _series(node.left, K)
        if k < 0 and base.coeffs[0] == 0:
            raise UnsupportedForOracle("negative power of a series vanishing at z = infinity")
        return _power(base, int(k))
    left, right = _series(node.left, K), _series(node.right, K)
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    return left * right


def oracle_from_ast(ast: Union[ExprAst, str], K: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Coefficients x[0..K] of the expansion of X(z) in powers of 1/z.

    Raises :class:`UnsupportedForOracle` for positive or fractional powers of
    z, and for log/sqrt/abs of z-dependent subexpressions.
    """
    if K < 1:
        raise ValueError("order must be positive")
    if isinstance(ast, str):
        ast = parse(ast)
    return _series(ast, K)
