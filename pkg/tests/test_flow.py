import numpy as np
import pytest

from homricci import catalog
from homricci.bochner import build_bochner
from homricci.flow import (
    FlowOptions,
    FlowResult,
    Verdict,
    check_slope_bound,
    extinction_bound,
    fiber_sup,
    flow_rhs,
    integrate,
    positive_scalar_samples,
    scalar_monotonicity_violations,
)
from homricci.presentation import Metric, equivariance_defect


def su2_bochner(P=np.eye(3)):
    e = catalog.get("su2")
    return e.presentation, build_bochner(e.presentation, P, e.compact_ideal)


def test_rhs_abelian_zero():
    p = catalog.get("abelian_3").presentation
    assert not np.any(flow_rhs(p, catalog.random_metric(p, 0).operator))


@pytest.mark.parametrize("c", [0.3, 1.0, 7.0])
def test_rhs_su2_scalar_metric(c):
    p = catalog.get("su2").presentation
    np.testing.assert_allclose(flow_rhs(p, c * np.eye(3)), -np.eye(3), atol=1e-14)


def test_rhs_heisenberg():
    p = catalog.get("heisenberg").presentation
    np.testing.assert_allclose(flow_rhs(p, np.eye(3)), np.diag([1.0, 1.0, -1.0]), atol=1e-14)


def test_su2_identity_extinction():
    p, data = su2_bochner()
    res = integrate(p, Metric(np.eye(3)), FlowOptions(t_max=5.0, sample_dt=0.05), bochner=data)
    assert res.verdict.kind == "Extinct"
    assert abs(res.verdict.time - 1.0) <= 1e-6
    for s in res.samples[:-1]:
        np.testing.assert_allclose(s.P, (1 - s.t) * np.eye(3), atol=1e-12)
    assert res.extinction_bound == pytest.approx(1.0)
    assert res.slope_violations == []


def test_su2_slope_is_half_killing_bound():
    p, data = su2_bochner()
    res = integrate(p, np.eye(3), FlowOptions(t_max=2.0), bochner=data)
    q = np.diff(res.step_k) / np.diff(res.step_t)
    np.testing.assert_allclose(q, data.killing_bound / 2, atol=1e-8)


def test_abelian_fixed_point():
    p = catalog.get("abelian_3").presentation
    g = catalog.random_metric(p, 4)
    res = integrate(p, g, FlowOptions(t_max=3.0, sample_dt=0.5))
    assert res.verdict.kind == "ReachedHorizon"
    assert res.verdict.time == 3.0
    for s in res.samples:
        np.testing.assert_array_equal(s.P, g.operator)


def test_heisenberg_immortal():
    p = catalog.get("heisenberg").presentation
    res = integrate(p, np.eye(3), FlowOptions(t_max=1000.0, sample_dt=10.0))
    assert res.verdict.kind == "ReachedHorizon"
    assert all(s.scalar < 0 for s in res.samples)
    assert res.scalar_violations == []
    assert res.positive_scalar == []


def test_fiber_sup_examples():
    e = catalog.get("su2_r")
    data = build_bochner(e.presentation, np.eye(4), e.compact_ideal)
    assert fiber_sup(data, np.eye(4)) == pytest.approx(1.0)
    assert fiber_sup(data, np.diag([4.0, 1.0, 1.0, 1.0])) == pytest.approx(4.0)


@pytest.mark.parametrize("name", ["su2_r", "su2_su2_r_diag", "so3_sl2r"])
def test_fiber_sup_monte_carlo(name):
    e = catalog.get(name)
    p = e.presentation
    g = catalog.random_metric(e, 21)
    data = build_bochner(p, g, e.compact_ideal)
    rng = np.random.default_rng(0)
    q = data.fiber_coords
    v = rng.standard_normal((100_000, q.shape[1])) @ q.T
    v /= np.linalg.norm(v, axis=1)[:, None]
    brute = np.einsum("na,ab,nb->n", v, g.operator, v).max()
    k = fiber_sup(data, g)
    assert brute <= k + 1e-12
    assert k - brute <= 1e-3 * k


def test_extinction_bound_examples():
    p, data = su2_bochner()
    assert extinction_bound(data, np.eye(3)) == pytest.approx(1.0)
    assert extinction_bound(data, 5 * np.eye(3)) == pytest.approx(5.0)


def test_su2_five_identity():
    p, data = su2_bochner(5 * np.eye(3))
    res = integrate(p, 5 * np.eye(3), FlowOptions(t_max=10.0, sample_dt=0.1), bochner=data)
    assert res.verdict.extinct
    assert abs(res.verdict.time - 5.0) <= 5e-4


def test_slope_check_flags_constant_k():
    # flat flow with a made-up negative bound: every step violates
    t = np.linspace(0, 1, 11)
    res = FlowResult([], Verdict("ReachedHorizon", 1.0), t, np.ones(11), np.zeros(11))
    assert check_slope_bound(res, -2.0) == list(range(10))
    assert check_slope_bound(res, 0.0) == []


def test_slope_check_needs_fiber_samples():
    res = FlowResult([], Verdict("ReachedHorizon", 1.0), np.arange(3.0), np.full(3, np.nan),
                     np.zeros(3))
    with pytest.raises(ValueError):
        check_slope_bound(res, -2.0)


@pytest.mark.parametrize("seed", range(10))
def test_su2_r_extinct_within_bound(seed):
    e = catalog.get("su2_r")
    g = catalog.random_metric(e, seed)
    data = build_bochner(e.presentation, g, e.compact_ideal)
    res = integrate(e.presentation, g, FlowOptions(t_max=50.0, sample_dt=0.1), bochner=data)
    assert res.verdict.extinct
    assert res.verdict.time <= res.extinction_bound * (1 + 1e-3)
    assert res.slope_violations == []
    assert res.scalar_violations == []


def test_trajectory_invariants():
    e = catalog.get("su2_r2_so2")
    g = catalog.random_metric(e, 2)
    data = build_bochner(e.presentation, g, e.compact_ideal)
    res = integrate(e.presentation, g, FlowOptions(t_max=50.0, sample_dt=0.05), bochner=data)
    t = res.times
    assert np.all(np.diff(t) > 0)
    floor = 1e-6 * np.linalg.eigvalsh(g.operator)[0]
    for s in res.samples:
        assert np.abs(s.P - s.P.T).max() <= 1e-10
        assert equivariance_defect(e.presentation, s.P) <= 1e-8
    for s in res.samples[:-1]:
        assert s.eigenvalues[0] >= floor


def test_scalar_nondecreasing_monitor():
    res = FlowResult([], Verdict("ReachedHorizon", 1.0), np.arange(4.0), np.zeros(4),
                     np.array([-3.0, -2.0, -2.5, -1.0]))
    assert scalar_monotonicity_violations(res) == [1]


def test_positive_scalar_monitor_roundoff():
    e = catalog.get("e2_nonflat")
    res = integrate(e.presentation, np.eye(3), FlowOptions(t_max=200.0, sample_dt=5.0))
    assert res.verdict.kind == "ReachedHorizon"
    assert positive_scalar_samples(res) == []
    assert max(s.scalar for s in res.samples) <= 1e-12


@pytest.mark.parametrize("name,t_end", [("su2", 0.2), ("heisenberg", 2.0)])
def test_parabolic_rescaling(name, t_end):
    p = catalog.get(name).presentation
    g0 = catalog.random_metric(p, 8).operator
    c = 3.0
    opts = FlowOptions(t_max=t_end, sample_dt=t_end / 4, rel_tol=1e-10, abs_tol=1e-12)
    a = integrate(p, g0, opts)
    b = integrate(p, c * g0, FlowOptions(t_max=c * t_end, sample_dt=c * t_end / 4,
                                          rel_tol=1e-10, abs_tol=1e-12))
    np.testing.assert_allclose(b.times, c * a.times, rtol=1e-12)
    np.testing.assert_allclose(b.metrics, c * a.metrics, rtol=1e-7, atol=1e-9)


def test_step_budget_failure():
    p = catalog.get("heisenberg").presentation
    res = integrate(p, np.eye(3), FlowOptions(t_max=10.0, max_steps=3))
    assert res.verdict.kind == "StepFailure"
    assert "max_steps" in res.verdict.reason


@pytest.mark.parametrize("bad", [dict(t_max=0), dict(rel_tol=-1), dict(extinction_eps=1.5),
                                 dict(max_steps=0)])
def test_options_validation(bad):
    with pytest.raises(ValueError):
        FlowOptions(**bad)


def test_flow_is_deterministic():
    e = catalog.get("su2_r")
    g = catalog.random_metric(e, 3)
    a = integrate(e.presentation, g, FlowOptions(t_max=1.0, sample_dt=0.1))
    b = integrate(e.presentation, g, FlowOptions(t_max=1.0, sample_dt=0.1))
    np.testing.assert_array_equal(a.metrics, b.metrics)
    np.testing.assert_array_equal(a.step_t, b.step_t)
