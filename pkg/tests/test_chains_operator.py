"""Commuting-pair operator chains: GG-HH order chain, AG midpoint chain,
norm chains of phi(u) = ||f(A^u B^(1-u))||, and the trace chains."""

import math

import numpy as np
import pytest

from hhverify import (
    CommutingPair,
    FunctionSpec,
    NormSpec,
    TraceVariant,
    operator_ag_midpoint_order_chain,
    operator_gg_hh_order_chain,
    operator_norm_gg_chain,
    trace_chain,
)
from hhverify.chains import (
    AG_MIDPOINT_TERM_NAMES,
    GG_HH_TERM_NAMES,
    HH_TERM_NAMES,
    TRACE_SQRT_TERM_NAMES,
    TRACE_SQUARED_TERM_NAMES,
    _eig_crossings,
)
from hhverify.sampler import RandomStream, random_commuting_pair


def _diag_pair(a, b) -> CommutingPair:
    a = np.asarray(a, dtype=float)
    return CommutingPair(np.eye(a.size), a, np.asarray(b, dtype=float))


CROSSED = _diag_pair([1.0, 2.0], [2.0, 1.0])  # eigencurves cross at u = 1/2


def _random_pairs(seed, dims=(2, 3, 5), count=20):
    stream = RandomStream(seed)
    for dim in dims:
        for _ in range(count):
            yield CommutingPair(*random_commuting_pair(stream, dim, 0.1, 10.0))


# ---------------------------------------------------------------------------
# GG-HH order chain


def test_gg_hh_exp_fixture():
    # spectra (1,2) and (2,1): sqrt(AB) = sqrt(2) I and both integrals are
    # int 2^s ds = 1/log 2, so the two gaps are closed form
    rep = operator_gg_hh_order_chain(FunctionSpec.exp(), CROSSED)
    assert rep.theorem_id == "op_gg_hh"
    assert tuple(c.lhs_name for c in rep.comparisons) == GG_HH_TERM_NAMES[:-1]
    assert rep.passed and rep.quad_reliable and rep.hypothesis_ok
    assert abs(rep.comparisons[0].min_gap - (1.0 / math.log(2.0) - math.sqrt(2.0))) < 1e-10
    assert abs(rep.comparisons[1].min_gap - (1.5 - 1.0 / math.log(2.0))) < 1e-10


def test_gg_hh_random_pairs_hold():
    for pair in _random_pairs(1001):
        for f in (FunctionSpec.exp(0.8), FunctionSpec.poly([1.0, 1.0, 3.0])):
            rep = operator_gg_hh_order_chain(f, pair)
            assert rep.passed and rep.hypothesis_ok, (f.describe(), rep.comparisons)


def test_gg_hh_power_function_is_exact():
    # t^r is multiplicative, so all three terms coincide entrywise
    rep = operator_gg_hh_order_chain(FunctionSpec.power(1.7), CROSSED)
    assert rep.passed
    for c in rep.comparisons:
        assert abs(c.min_gap) < 1e-10


# ---------------------------------------------------------------------------
# AG midpoint order chain


def test_ag_midpoint_exp_collapses():
    # for f = exp the geometric mean of the two segment values is constant
    rep = operator_ag_midpoint_order_chain(FunctionSpec.exp(), CROSSED)
    assert rep.theorem_id == "op_ag_midpoint"
    assert tuple(c.lhs_name for c in rep.comparisons) == AG_MIDPOINT_TERM_NAMES[:-1]
    assert rep.passed
    for c in rep.comparisons:
        assert abs(c.min_gap) < 1e-10


def test_ag_midpoint_inverse_strict():
    pair = _diag_pair([1.0, 4.0], [2.0, 0.5])
    rep = operator_ag_midpoint_order_chain(FunctionSpec.inverse(), pair)
    assert rep.passed and rep.hypothesis_ok
    assert all(c.min_gap > 1e-4 for c in rep.comparisons)


def test_ag_midpoint_random_pairs_hold():
    for pair in _random_pairs(2002):
        rep = operator_ag_midpoint_order_chain(FunctionSpec.inverse(), pair)
        assert rep.passed and rep.hypothesis_ok, rep.comparisons


def test_ag_midpoint_flags_non_ag_convex_function():
    # x^2 is log-concave, so the hypothesis fails and the order reverses
    pair = _diag_pair([1.0], [2.0])
    rep = operator_ag_midpoint_order_chain(FunctionSpec.power(2.0), pair)
    assert not rep.hypothesis_ok
    assert not rep.passed
    silent = operator_ag_midpoint_order_chain(
        FunctionSpec.power(2.0), pair, check_hypothesis=False
    )
    assert silent.hypothesis_ok and not silent.passed


# ---------------------------------------------------------------------------
# norm chain of phi(u) = ||f(A^u B^(1-u))||


def test_norm_gg_exp_opnorm_fixture():
    # log phi(u) = max(2^(1-u), 2^u); all five log-terms are closed form
    rep = operator_norm_gg_chain(FunctionSpec.exp(), CROSSED, NormSpec.opnorm())
    assert rep.theorem_id == "op_norm_gg"
    assert rep.term_names == HH_TERM_NAMES
    assert rep.passed and rep.quad_reliable and rep.hypothesis_ok
    expected_logs = (
        math.sqrt(2.0),
        2.0 ** 0.75,
        2.0 * (2.0 - math.sqrt(2.0)) / math.log(2.0),
        math.sqrt(2.0) / 2.0 + 1.0,
        2.0,
    )
    for got, want in zip(rep.term_values, expected_logs):
        assert abs(math.log(got) - want) < 1e-10, (math.log(got), want)


def test_norm_gg_crossing_detection():
    cuts = _eig_crossings(np.array([1.0, 2.0]), np.array([2.0, 1.0]))
    np.testing.assert_allclose(cuts, [0.5], atol=1e-15)
    # parallel log-curves never cross
    assert _eig_crossings(np.array([1.0, 2.0]), np.array([2.0, 4.0])).size == 0


def test_norm_gg_kinked_curve_stays_reliable():
    # the max-norm curve has a kink at the crossing; segmented quadrature
    # must still satisfy its own doubling check
    for spec in (NormSpec.opnorm(), NormSpec.kyfan(1)):
        rep = operator_norm_gg_chain(FunctionSpec.exp(), CROSSED, spec)
        assert rep.quad_reliable and rep.passed


def test_norm_gg_across_norm_family():
    specs = (
        NormSpec.schatten(1.0),
        NormSpec.schatten(2.0),
        NormSpec.schatten(3.0),
        NormSpec.opnorm(),
        NormSpec.kyfan(1),
        NormSpec.kyfan(2),
    )
    for pair in _random_pairs(3003, dims=(2, 3, 5), count=10):
        for spec in specs:
            rep = operator_norm_gg_chain(FunctionSpec.exp(0.5), pair, spec)
            assert rep.passed and rep.quad_reliable, (spec.describe(), rep.margins)


def test_norm_gg_integral_matches_riemann_sum():
    pair = _diag_pair([1.0, 3.0, 0.4], [2.0, 0.7, 5.0])
    f = FunctionSpec.exp(0.6)
    spec = NormSpec.schatten(2.0)
    rep = operator_norm_gg_chain(f, pair, spec)
    us = (np.arange(100_000) + 0.5) / 100_000
    grid = np.power(pair.a[None, :], us[:, None]) * np.power(pair.b[None, :], (1.0 - us)[:, None])
    phis = np.sqrt(np.sum(f.eval_array(grid) ** 2, axis=1))
    oracle = math.exp(float(np.mean(np.log(phis))))
    assert abs(rep.term_values[2] - oracle) < 1e-6 * oracle


# ---------------------------------------------------------------------------
# trace chains


def test_trace_sqrt_identity_fixture():
    # A = B = I_2: tau is constant 2, only the first term drops to sqrt(2)
    rep = trace_chain(TraceVariant.SQRT, _diag_pair([1.0, 1.0], [1.0, 1.0]))
    assert rep.theorem_id == "trace_sqrt"
    assert rep.term_names == TRACE_SQRT_TERM_NAMES
    assert rep.passed
    expected = (math.sqrt(2.0), 2.0, 2.0, 2.0, 2.0, 2.0)
    for got, want in zip(rep.term_values, expected):
        assert abs(got - want) < 1e-12


def test_trace_squared_term_names_and_endpoints():
    pair = _diag_pair([1.0, 2.0], [3.0, 0.5])
    rep = trace_chain(TraceVariant.SQUARED, pair)
    assert rep.theorem_id == "trace_squared"
    assert rep.term_names == TRACE_SQUARED_TERM_NAMES
    assert rep.passed
    assert abs(rep.term_values[0] - float(np.sum(pair.a * pair.b))) < 1e-12
    assert abs(rep.term_values[-1] - float(np.sum(pair.a) * np.sum(pair.b))) < 1e-12


def test_trace_chains_random_pairs_hold():
    for pair in _random_pairs(4004):
        for variant in (TraceVariant.SQRT, TraceVariant.SQUARED):
            rep = trace_chain(variant, pair)
            assert rep.passed and rep.quad_reliable, (variant, rep.margins)


def test_trace_integral_matches_riemann_sum():
    pair = _diag_pair([1.0, 4.0, 0.3], [2.0, 0.6, 3.0])
    rep = trace_chain(TraceVariant.SQRT, pair)
    us = (np.arange(100_000) + 0.5) / 100_000
    taus = np.sum(
        np.power(pair.a[None, :], us[:, None]) * np.power(pair.b[None, :], (1.0 - us)[:, None]),
        axis=1,
    )
    oracle = math.exp(float(np.mean(np.log(taus))))
    assert abs(rep.term_values[3] - oracle) < 1e-6 * oracle


def test_trace_sqrt_first_term_uses_product_trace():
    pair = _diag_pair([2.0, 5.0], [0.7, 1.1])
    rep = trace_chain(TraceVariant.SQRT, pair)
    assert abs(rep.term_values[0] - math.sqrt(2.0 * 0.7 + 5.0 * 1.1)) < 1e-12
    assert abs(rep.term_values[1] - (math.sqrt(1.4) + math.sqrt(5.5))) < 1e-12


# ---------------------------------------------------------------------------
# hypothesis and domain handling shared by the commuting chains


def test_domain_violation_outside_function_domain():
    pair = _diag_pair([0.5, 2.0], [1.0, 3.0])
    f = FunctionSpec.poly([0.0, 1.0], domain=(1.0, math.inf))
    from hhverify import DomainViolationError

    with pytest.raises(DomainViolationError):
        operator_gg_hh_order_chain(f, pair)
    with pytest.raises(DomainViolationError):
        operator_ag_midpoint_order_chain(f, pair)
    with pytest.raises(DomainViolationError):
        operator_norm_gg_chain(f, pair, NormSpec.opnorm())
