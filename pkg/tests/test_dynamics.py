import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lookahead_hrde import games as G
from lookahead_hrde.dynamics import (
    OVERFLOW_CAP,
    LookaheadConfig,
    Outcome,
    classify_trajectory,
    gd_run,
    gd_step,
    lookahead_run,
    row_norms,
)
from lookahead_hrde.errors import ConfigError, DimensionMismatch

BG1 = G.bilinear(np.eye(1))
BG2 = G.bilinear(np.eye(2))


@pytest.mark.parametrize("k,alpha,gamma", [(0, 0.5, 0.1), (2, -0.1, 0.1), (2, 1.1, 0.1), (2, 0.5, 0.0), (2.5, 0.5, 0.1)])
def test_config_validation(k, alpha, gamma):
    with pytest.raises(ConfigError):
        LookaheadConfig(k, alpha, gamma)


def test_gd_step_bilinear():
    out = gd_step(BG1, G.JointPoint([1.0], [0.0]), 0.1)
    assert isinstance(out, G.JointPoint)
    np.testing.assert_allclose(out.z, [1.0, 0.1])


def test_gd_step_fixed_point_and_errors():
    np.testing.assert_array_equal(gd_step(BG2, np.zeros(4), 0.3), np.zeros(4))
    with pytest.raises(ConfigError):
        gd_step(BG1, [1.0, 0.0], 0.0)
    with pytest.raises(DimensionMismatch):
        gd_step(BG1, [1.0, 0.0, 0.0, 0.0], 0.1)


@pytest.mark.parametrize("gamma", [0.01, 0.1, 0.5])
def test_gd_distance_grows_by_exact_factor(gamma):
    rec = gd_run(BG2, np.array([1.0, -0.5, 0.3, 2.0]), gamma, 200)
    d = rec.distances
    assert np.all(np.diff(d) > 0)
    # every step scales |z|^2 by 1 + gamma^2 lam^2 when A = I
    np.testing.assert_allclose(d[1:] ** 2 / d[:-1] ** 2, 1 + gamma**2, rtol=1e-12)


def test_lookahead_alpha_one_is_plain_gd():
    cfg = LookaheadConfig(5, 1.0, 0.1)
    rng = np.random.default_rng(0)
    g = G.make_quadratic(rng.standard_normal((2, 2)), np.eye(2), 0.5 * np.eye(2))
    z0 = rng.standard_normal(4)
    rec = lookahead_run(g, z0, cfg, 20)
    gd = gd_run(g, z0, 0.1, 100)
    np.testing.assert_allclose(rec.points, gd.points[::5], rtol=0, atol=1e-12)


def test_lookahead_alpha_zero_is_constant():
    rec = lookahead_run(BG2, np.ones(4), LookaheadConfig(5, 0.0, 0.1), 10)
    assert np.all(rec.points == 1.0)
    assert classify_trajectory(rec) is Outcome.UNDECIDED


def test_record_shape_and_distances():
    rec = lookahead_run(BG2, np.ones(4), LookaheadConfig(3, 0.5, 0.2), 17)
    assert rec.points.shape == (18, 4)
    np.testing.assert_allclose(rec.distances, np.linalg.norm(rec.points, axis=1))
    np.testing.assert_array_equal(rec.point(0).x, [1.0, 1.0])


def test_lookahead_rejects_zero_steps():
    with pytest.raises(ConfigError):
        lookahead_run(BG1, [1.0, 1.0], LookaheadConfig(5, 0.5, 0.1), 0)


@settings(max_examples=30, deadline=None)
@given(st.floats(-50, 50).filter(lambda c: abs(c) > 1e-3), st.integers(0, 1000))
def test_bilinear_outer_map_is_linear(c, seed):
    z0 = np.random.default_rng(seed).standard_normal(4)
    cfg = LookaheadConfig(5, 0.5, 0.1)
    base = lookahead_run(BG2, z0, cfg, 30).points
    scaled = lookahead_run(BG2, c * z0, cfg, 30).points
    np.testing.assert_allclose(scaled, c * base, rtol=1e-10, atol=1e-300)


def test_bg_alpha_half_shrinks():
    rec = lookahead_run(BG1, [1.0, 1.0], LookaheadConfig(5, 0.5, 0.1), 200)
    # the outer map on A = I is a scaled rotation: exact factor 0.02305... after 200 steps
    assert rec.final_distance / rec.initial_distance == pytest.approx(0.023053773520568, rel=1e-9)


def test_bg_alpha_09_grows():
    rec = lookahead_run(BG2, np.ones(4), LookaheadConfig(5, 0.9, 0.1), 200)
    assert rec.final_distance / rec.initial_distance == pytest.approx(10.113156302638, rel=1e-9)


def test_classify_diverged_and_converged():
    rec = lookahead_run(BG1, [1.0, 1.0], LookaheadConfig(5, 0.9, 0.1), 1000)
    assert classify_trajectory(rec) is Outcome.DIVERGED
    rec = lookahead_run(G.potential(2), np.ones(4), LookaheadConfig(5, 0.5, 0.5), 50)
    assert classify_trajectory(rec) is Outcome.CONVERGED


def test_classify_bad_thresholds():
    rec = lookahead_run(BG1, [1.0, 1.0], LookaheadConfig(5, 0.5, 0.1), 3)
    with pytest.raises(ConfigError):
        classify_trajectory(rec, conv_tol=0)
    with pytest.raises(ConfigError):
        classify_trajectory(rec, div_factor=1.0)


def test_overflow_truncates_and_flags():
    g = G.potential(1)
    rec = lookahead_run(g, [1.0, 1.0], LookaheadConfig(5, 1.0, 10.0), 1000)
    assert rec.overflow
    assert len(rec.points) < 1001
    assert np.all(np.isfinite(rec.points))
    assert rec.final_distance == OVERFLOW_CAP
    assert classify_trajectory(rec) is Outcome.DIVERGED


def test_row_norms_survive_huge_values():
    pts = np.array([[1e300, 1e300], [3.0, 4.0], [0.0, 0.0]])
    np.testing.assert_allclose(row_norms(pts), [np.sqrt(2) * 1e300, 5.0, 0.0])


def test_bg_sides_of_alpha_boundary():
    # With k = 5, gamma = 0.1 every alpha below 0.8 shrinks the distance over
    # 200 steps and every alpha above grows it.
    for alpha in np.round(np.arange(0.05, 0.96, 0.05), 2):
        if alpha == 0.8:
            continue
        rec = lookahead_run(BG2, np.ones(4), LookaheadConfig(5, alpha, 0.1), 200)
        ratio = rec.final_distance / rec.initial_distance
        assert (ratio < 1) == (alpha < 0.8), alpha
