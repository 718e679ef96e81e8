"""Gauss-Legendre rule correctness and the doubling reliability check."""

import math

import numpy as np
import pytest

from hhverify import (
    NodeCountError,
    NonFiniteSampleError,
    gl_rule,
    integrate_matrix,
    integrate_matrix_checked,
    integrate_scalar,
    integrate_scalar_checked,
)
from hhverify.errors import DimMismatchError
from hhverify.quadrature import MAX_NODES, integrate_stack_checked


def test_one_node_rule_is_midpoint():
    rule = gl_rule(1)
    np.testing.assert_allclose(rule.nodes, [0.0], atol=0)
    np.testing.assert_allclose(rule.weights, [2.0], atol=0)


def test_two_node_rule():
    rule = gl_rule(2)
    np.testing.assert_allclose(rule.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(rule.weights, [1.0, 1.0], atol=1e-15)


def test_three_node_rule_integrates_quartic_exactly():
    # degree-5 rule: integral of x^4 over [-1, 1] is 2/5
    rule = gl_rule(3)
    val = float(rule.weights @ rule.nodes**4)
    assert abs(val - 0.4) <= 1e-14


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16, 64, 128, 512])
def test_weights_sum_to_two_and_nodes_antisymmetric(n):
    rule = gl_rule(n)
    assert abs(float(rule.weights.sum()) - 2.0) <= 1e-13
    np.testing.assert_array_equal(rule.nodes, -rule.nodes[::-1])
    assert rule.weights.min() > 0.0
    assert rule.nodes.min() > -1.0 and rule.nodes.max() < 1.0


@pytest.mark.parametrize("n", [2, 3, 7, 20, 50, 100, 256])
def test_rule_matches_numpy_leggauss(n):
    rule = gl_rule(n)
    x, w = np.polynomial.legendre.leggauss(n)
    np.testing.assert_allclose(rule.nodes, x, atol=1e-13)
    np.testing.assert_allclose(rule.weights, w, atol=1e-13)


def test_rule_arrays_are_frozen():
    rule = gl_rule(10)
    with pytest.raises(ValueError):
        rule.nodes[0] = 0.0


@pytest.mark.parametrize("bad", [0, -3, MAX_NODES + 1, 2.5])
def test_node_count_validation(bad):
    with pytest.raises(NodeCountError):
        gl_rule(bad)


def test_scalar_integral_exponential():
    val = integrate_scalar(np.exp, 0.0, 2.0, 32)
    assert abs(val - (math.e**2 - 1.0)) <= 1e-12


def test_scalar_integral_polynomial_exact():
    # 64 nodes integrate degree <= 127 exactly (up to roundoff)
    val = integrate_scalar(lambda x: 7 * x**9 - x**3 + 2, -1.5, 2.0, 64)
    exact = 7 * (2.0**10 - 1.5**10) / 10 - (2.0**4 - 1.5**4) / 4 + 2 * 3.5
    assert abs(val - exact) <= 1e-10 * max(1.0, abs(exact))


def test_scalar_integral_reversed_interval_flips_sign():
    fwd = integrate_scalar(np.exp, 0.0, 1.0, 16)
    rev = integrate_scalar(np.exp, 1.0, 0.0, 16)
    assert abs(fwd + rev) <= 1e-14


def test_matrix_integral_entrywise():
    def g(t):
        return np.array([[t, t**2], [math.exp(t), 1.0]])

    val = integrate_matrix(g, 0.0, 1.0, 24)
    want = np.array([[0.5, 1 / 3], [math.e - 1.0, 1.0]])
    np.testing.assert_allclose(val, want, atol=1e-12)


def test_checked_smooth_integrand_is_reliable():
    val, ok = integrate_scalar_checked(np.cos, 0.0, 1.0, 32)
    assert ok
    assert abs(val - math.sin(1.0)) <= 1e-13


def test_checked_kinked_integrand_is_flagged():
    # |x| has a kink at 0: GL doubling cannot settle below 1e-9
    _, ok = integrate_scalar_checked(np.abs, -1.0, 1.0, 32)
    assert not ok


def test_matrix_checked_flags_kink():
    def g(t):
        return np.array([[abs(t - 0.3), 0.0], [0.0, 1.0]])

    _, ok = integrate_matrix_checked(g, 0.0, 1.0, 32)
    assert not ok


def test_non_finite_sample_is_named():
    with np.errstate(divide="ignore"), pytest.raises(NonFiniteSampleError):
        integrate_scalar(lambda x: 1.0 / x, -1.0, 1.0, 33)  # odd n puts a node at 0


def test_stack_integrator_shapes():
    # scalar stack -> shape (), vector stack -> (k,), matrix stack -> (m, m)
    v, ok = integrate_stack_checked(lambda ts: np.exp(ts), 0.0, 1.0, 32)
    assert v.shape == () and ok
    assert abs(float(v) - (math.e - 1.0)) <= 1e-13

    v, ok = integrate_stack_checked(lambda ts: np.stack([ts, ts**2], axis=1), 0.0, 1.0, 32)
    assert v.shape == (2,) and ok
    np.testing.assert_allclose(v, [0.5, 1 / 3], atol=1e-13)

    v, ok = integrate_stack_checked(
        lambda ts: ts[:, None, None] * np.eye(2)[None, :, :], 0.0, 1.0, 16
    )
    assert v.shape == (2, 2) and ok
    np.testing.assert_allclose(v, 0.5 * np.eye(2), atol=1e-14)


def test_stack_integrator_degenerate_interval():
    v, ok = integrate_stack_checked(lambda ts: np.stack([ts, ts], axis=1), 0.5, 0.5, 16)
    assert ok
    np.testing.assert_array_equal(v, np.zeros(2))


def test_stack_integrator_rejects_wrong_leading_axis():
    with pytest.raises(DimMismatchError):
        integrate_stack_checked(lambda ts: np.ones(3), 0.0, 1.0, 16)
