import numpy as np
import pytest
from hypothesis import given, strategies as st

from ztinv.core import ConfigError, EvalError, InversionConfig, Method, RankDeficient
from ztinv.invlsq import (
    build_design_matrix,
    condition_estimate,
    draw_sample_points,
    householder_qr,
    invert_lsq,
    solve_least_squares,
)
from ztinv.zexpr import Expression

from conftest import EXAMPLE1_COEFFS, geometric, polynomial_transform


def test_draw_points_empty_and_guard():
    assert len(draw_sample_points(0, 1.05, 2, 1)) == 0
    with pytest.raises(ConfigError):
        draw_sample_points(10, 0.8, 2, 1)
    with pytest.raises(ConfigError):
        draw_sample_points(10, 1.0, 2, 1)


def test_draw_points_distribution():
    pts = draw_sample_points(1000, 1.05, 2, seed=5).points
    mod = np.abs(pts)
    assert mod.min() >= 1.05 and mod.max() <= 2
    # E|z| = (1.05 + 2)/2 for a uniform radius
    assert abs(mod.mean() - 1.525) < 0.02


def test_draw_points_deterministic():
    a = draw_sample_points(50, 1.05, 2, seed=11).points
    b = draw_sample_points(50, 1.05, 2, seed=11).points
    c = draw_sample_points(50, 1.05, 2, seed=12).points
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_design_matrix_examples():
    np.testing.assert_array_equal(build_design_matrix([2], 1), [[1, 0.5]])
    np.testing.assert_allclose(build_design_matrix([2j], 2), [[1, -0.5j, -0.25]], atol=1e-16)
    A = build_design_matrix(draw_sample_points(7, 1.05, 2, 0), 0)
    np.testing.assert_array_equal(A, np.ones((7, 1)))


def test_design_matrix_entries_bounded():
    A = build_design_matrix(draw_sample_points(30, 1.05, 2, 0), 25)
    assert np.all(A[:, 0] == 1)
    assert np.all(np.abs(A) <= 1 + 1e-15)


def test_householder_qr_reconstructs():
    rng = np.random.default_rng(2)
    M = rng.normal(size=(12, 5))
    vs, R = householder_qr(M)
    Q = np.eye(12)
    for j in range(len(vs) - 1, -1, -1):
        v = vs[j]
        Q[j:, :] -= 2 * np.outer(v, v @ Q[j:, :])
    np.testing.assert_allclose(Q[:, :5] @ R, M, atol=1e-13)
    assert np.allclose(np.tril(R, -1), 0)


def test_solve_consistent_square_system():
    pts = np.array([1.3, 1.7j, -1.9])
    A = build_design_matrix(pts, 2)
    x0 = np.array([1.0, 2.0, 3.0])
    x, res, cond = solve_least_squares(A, A @ x0)
    np.testing.assert_allclose(x, x0, atol=1e-12)
    assert res <= 1e-10
    assert cond >= 1


def test_solve_matches_numpy_lstsq():
    rng = np.random.default_rng(4)
    A = build_design_matrix(draw_sample_points(20, 1.05, 2, 4), 6)
    X = rng.normal(size=20) + 1j * rng.normal(size=20)
    x, res, cond = solve_least_squares(A, X)
    S = np.vstack([A.real, A.imag])
    b = np.concatenate([X.real, X.imag])
    ref, ref_res, *_ = np.linalg.lstsq(S, b, rcond=None)
    np.testing.assert_allclose(x, ref, atol=1e-10)
    assert res == pytest.approx(np.sqrt(ref_res[0]), rel=1e-10)
    assert cond == pytest.approx(np.linalg.cond(S), rel=1e-8)


def test_polynomial_transform_recovered():
    pts = draw_sample_points(20, 1.05, 2, 9)
    A = build_design_matrix(pts, 5)
    X = 1 + 0.5 / pts.points
    x, res, _ = solve_least_squares(A, X)
    np.testing.assert_allclose(x, [1, 0.5, 0, 0, 0, 0], atol=1e-9)


def test_duplicated_points_rank_deficient():
    A = build_design_matrix(np.full(10, 1.4 + 0.3j), 4)
    with pytest.raises(RankDeficient):
        solve_least_squares(A, np.ones(10))


def test_too_few_points():
    with pytest.raises(ConfigError):
        invert_lsq(Expression("z^-1"), InversionConfig(4, 3))


def test_invert_monomial():
    est = invert_lsq(Expression("z^-1"), InversionConfig(4, 8, rng_seed=7))
    assert est.method is Method.LSQ and len(est) == 4
    np.testing.assert_allclose(est.samples, [0, 1, 0, 0], atol=1e-9)
    assert est.residual_norm >= 0 and est.condition_estimate >= 1


def test_invert_example1(example1):
    est = invert_lsq(example1, InversionConfig(30, 33, rng_seed=42))
    np.testing.assert_allclose(est.samples[:6], EXAMPLE1_COEFFS, atol=1e-6)


def test_invert_geometric():
    est = invert_lsq(geometric(0.5), InversionConfig(20, 24))
    assert np.max(np.abs(est.samples - 0.5 ** np.arange(20))) <= 1e-6


@given(st.integers(0, 20), st.integers(0, 2**32 - 1))
def test_exact_polynomial_recovery(degree, seed):
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-1, 1, degree + 1)
    N = 21
    est = invert_lsq(polynomial_transform(coeffs), InversionConfig(N, 24, rng_seed=seed))
    expected = np.zeros(N)
    expected[: degree + 1] = coeffs
    np.testing.assert_allclose(est.samples, expected, atol=1e-8)


def test_seed_determinism(example1):
    cfg = InversionConfig(25, rng_seed=123)
    a, b = invert_lsq(example1, cfg), invert_lsq(example1, cfg)
    assert a.samples.tobytes() == b.samples.tobytes()
    assert (a.residual_norm, a.condition_estimate) == (b.residual_norm, b.condition_estimate)


def test_interior_points_ill_conditioned():
    outside = draw_sample_points(44, 1.05, 2, 42)
    inside = draw_sample_points(44, 0.5, 0.95, 42, enforce_exterior=False)
    ratio = condition_estimate(build_design_matrix(inside, 40)) / \
        condition_estimate(build_design_matrix(outside, 40))
    assert ratio >= 1e3


def test_truncation_consistency():
    X = geometric(0.9)
    n = np.arange(20)
    err20 = np.max(np.abs(invert_lsq(X, InversionConfig(20, 24)).samples[:20] - 0.9 ** n))
    err40 = np.max(np.abs(invert_lsq(X, InversionConfig(40, 44)).samples[:20] - 0.9 ** n))
    assert err40 <= err20


def test_evaluation_failure_propagates():
    cfg = InversionConfig(30)
    pole = draw_sample_points(cfg.point_count, cfg.annulus_min, cfg.annulus_max,
                              cfg.rng_seed).points[3]
    with pytest.raises(EvalError):
        invert_lsq(Expression(f"1/(z-({float(pole.real)!r}+{float(pole.imag)!r}*sqrt(0-1)))"), cfg)
