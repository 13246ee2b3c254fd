import numpy as np
import pytest
from hypothesis import settings

from ztinv.zexpr import Expression

settings.register_profile("ci", max_examples=50, deadline=None)
settings.load_profile("ci")

EXAMPLE1 = "exp(1/z)*sin(1/z)"
EXAMPLE2 = "exp(exp(z^-1))"
# x[0..5] of Example 1; x[5] is -1/30 (direct series product)
EXAMPLE1_COEFFS = np.array([0.0, 1.0, 1.0, 1 / 3, 0.0, -1 / 30])


@pytest.fixture
def example1():
    return Expression(EXAMPLE1)


@pytest.fixture
def example2():
    return Expression(EXAMPLE2)


def geometric(a):
    return Expression(f"1/(1-{a!r}*z^-1)")


def polynomial_transform(coeffs):
    """X(z) = sum_k c[k] z**-k as a plain closure (not vectorized)."""
    coeffs = np.asarray(coeffs, dtype=float)

    def X(z):
        w = 1 / z
        acc = 0j
        for c in coeffs[::-1]:
            acc = acc * w + c
        return acc

    return X
