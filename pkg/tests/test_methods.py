import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from accelgeom import methods as m
from accelgeom.errors import ConstructionError, UnsupportedOperation
from accelgeom.methods import Form
from accelgeom.objectives import Quadratic, Quartic, random_spd

from conftest import DEMO_H, DEMO_L, DEMO_MU
from oracles import quad_prox

X0 = np.array([1.0, 1.0])


# ---------------------------------------------------------- parameters

def test_default_params_condition_one():
    p = m.default_params(Form.FORM_I, 1.0, 1.0)
    assert p.beta == 0.0 and p.eta == 1.0 and p.alpha == 1.0


def test_default_params_bregman_agm():
    p = m.default_params(Form.BREGMAN_AGM, 1.0, 4.0)
    assert p.beta == pytest.approx(1 / 3, rel=1e-15)
    assert p.eta == 2.0 and p.tau == 2.0
    assert p.alpha == pytest.approx(2 / 3, rel=1e-15)
    assert p.theta == pytest.approx(2 / 3, rel=1e-15)


def test_default_params_prox_point():
    p = m.default_params(Form.PROX_POINT, 1.0, 4.0)
    assert p.tau == 0.5 and p.alpha == 1.0


def test_default_params_other_forms():
    assert m.default_params(Form.FORM_I, 1.0, 4.0).alpha == 0.5
    assert m.default_params(Form.FORM_I, 1.0, 4.0).gamma == 1.0
    assert m.default_params(Form.AT, 1.0, 4.0).gamma == 0.25
    lan = m.default_params(Form.LAN, 1.0, 4.0)
    assert lan.eta == pytest.approx(lan.theta * 4.0)
    assert lan.tau == pytest.approx(lan.beta / lan.theta)
    hb = m.default_params(Form.HEAVY_BALL, 1.0, 4.0)
    assert hb.gamma == pytest.approx(4 / 9)


@pytest.mark.parametrize("mu,L", [(2.0, 1.0), (0.0, 1.0), (-1.0, 1.0), (1.0, math.inf)])
def test_default_params_rejects_bad_constants(mu, L):
    with pytest.raises(ConstructionError):
        m.default_params(Form.FORM_II, mu, L)


def test_hyperparams_validates():
    p = m.default_params(Form.FORM_II, 1.0, 4.0)
    with pytest.raises(ConstructionError):
        p.with_(eta=math.nan)
    assert p.with_(beta=0.5).beta == 0.5
    assert set(p.to_dict()) == {"mu", "L", "eta", "tau", "alpha", "beta", "gamma", "theta"}


def test_params_matching_bregman():
    p = m.default_params(Form.BREGMAN_AGM, 1.0, 4.0)
    q = m.params_matching_bregman(p)
    assert q.beta == pytest.approx(p.tau / (1 + p.tau))
    assert q.L == pytest.approx(p.eta * (1 + p.tau))
    sl, sm = math.sqrt(q.L), math.sqrt(q.mu)
    assert (sl - sm) / (sl + sm) == pytest.approx(q.beta, rel=1e-12)
    with pytest.raises(ConstructionError):
        m.params_matching_bregman(p.with_(alpha=0.1))


# ------------------------------------------------------- proximal point

def test_prox_step_closed_form(rng):
    H = random_spd(rng, 5, 0.3, 30)
    xs = rng.standard_normal(5)
    f = Quadratic(H, xs)
    for eta in (0.01, 1.0, 100.0):
        xp = rng.standard_normal(5)
        x = m.prox_point_step(f, eta, xp)
        np.testing.assert_allclose(x, quad_prox(H, xs, eta, xp), atol=1e-12)
        assert np.linalg.norm(x + f.gradient(x) / eta - xp) <= 1e-10


def test_prox_step_frozen_value(demo_quadratic):
    # frozen from an exact symbolic solve of (H + ηI)x = η(1, 1)
    x = m.prox_point_step(demo_quadratic, math.sqrt(5), X0)
    np.testing.assert_allclose(x, [0.44721359549995793928, 0.34164078649987381785], rtol=1e-14)


def test_prox_step_fixed_point(demo_quadratic):
    np.testing.assert_array_equal(m.prox_point_step(demo_quadratic, 2.0, np.zeros(2)), 0.0)


def test_prox_step_large_eta_bound(demo_quadratic):
    eta = 1e8
    x = m.prox_point_step(demo_quadratic, eta, X0)
    bound = np.linalg.norm(demo_quadratic.gradient(X0)) / eta
    assert np.linalg.norm(x - X0) <= bound * (1 + 1e-6)


def test_prox_step_quartic_identity(demo_quartic):
    x = m.prox_point_step(demo_quartic, 50.0, X0)
    r = x + demo_quartic.gradient(x) / 50.0 - X0
    assert np.linalg.norm(r) <= 1e-10 * np.linalg.norm(X0)


def test_prox_step_rejects_nonpositive_eta(demo_quadratic):
    with pytest.raises(ValueError):
        m.prox_point_step(demo_quadratic, 0.0, X0)


def test_primal_dual_matches_prox_point(demo_quadratic):
    eta = 1.3
    p = m.default_params(Form.PROX_POINT, DEMO_MU, DEMO_L).with_(eta=eta)
    a = m.run(Form.PROX_POINT, demo_quadratic, p, X0, 50).points()
    b = m.run(Form.PRIMAL_DUAL_PP, demo_quadratic, p, X0, 50).points()
    assert np.max(np.abs(a - b)) <= 1e-9


def test_primal_dual_dual_condition(demo_quadratic):
    s = m.PrimalDualState(X0, demo_quadratic.gradient(X0))
    eta = 2.0
    x, g = m.primal_dual_pp_step(demo_quadratic, eta, s)
    assert np.linalg.norm(demo_quadratic.conjugate_gradient(g) + g / eta - X0) <= 1e-10
    np.testing.assert_allclose(x, m.prox_point_step(demo_quadratic, eta, X0), atol=1e-10)


def test_primal_dual_fixed_point(demo_quadratic):
    x, g = m.primal_dual_pp_step(demo_quadratic, 2.0, m.PrimalDualState(np.zeros(2), np.zeros(2)))
    np.testing.assert_array_equal(x, 0.0)
    np.testing.assert_array_equal(g, 0.0)


def test_primal_dual_quartic_dual_condition(demo_quartic):
    s = m.PrimalDualState(X0, demo_quartic.gradient(X0))
    x, g = m.primal_dual_pp_step(demo_quartic, 10.0, s)
    assert np.linalg.norm(demo_quartic.conjugate_gradient(g) + g / 10.0 - X0) <= 1e-9


# --------------------------------------------------------- inertial form

def test_inertial_change_of_variables(demo_quadratic):
    p = m.default_params(Form.INERTIAL_PP, DEMO_MU, DEMO_L)
    pd = m.run(Form.PRIMAL_DUAL_PP, demo_quadratic, p, X0, 50)
    ip = m.run(Form.INERTIAL_PP, demo_quadratic, p, X0, 50)
    k = p.alpha / p.eta
    z_from_pd = pd.field("x") - k * pd.field("g")
    assert np.max(np.abs(z_from_pd - ip.field("z"))) <= 1e-10
    assert np.max(np.abs(pd.points() - ip.points())) <= 1e-10


def test_inertial_fixed_point(demo_quadratic):
    p = m.default_params(Form.INERTIAL_PP, DEMO_MU, DEMO_L)
    for geom in ("euclidean", "bregman"):
        z, g = m.inertial_pp_step(demo_quadratic, p, m.InertialState(np.zeros(2), np.zeros(2)), geom)
        np.testing.assert_array_equal(z, 0.0)
        np.testing.assert_array_equal(g, 0.0)


def test_inertial_bregman_geometry_is_bregman_agm(demo_quadratic):
    p = m.default_params(Form.BREGMAN_AGM, DEMO_MU, DEMO_L)
    s_agm = m.initial_state(Form.BREGMAN_AGM, demo_quadratic, p, X0)
    s_in = m.map_state(Form.BREGMAN_AGM, Form.INERTIAL_PP, s_agm, p)
    for _ in range(40):
        s_agm = m.bregman_agm_step(demo_quadratic, p, s_agm)
        s_in = m.inertial_pp_step(demo_quadratic, p, s_in, geometry="bregman")
        back = m.map_state(Form.INERTIAL_PP, Form.BREGMAN_AGM, s_in, p, obj=demo_quadratic)
        for a, b in zip(back, s_agm):
            assert np.max(np.abs(a - b)) <= 1e-10


def test_inertial_unknown_geometry(demo_quadratic):
    p = m.default_params(Form.INERTIAL_PP, DEMO_MU, DEMO_L)
    with pytest.raises(ValueError):
        m.inertial_pp_step(demo_quadratic, p, m.InertialState(X0, X0), geometry="riemann")


def test_inertial_monotone_after_warmup(demo_quadratic):
    # informational: holds on this instance, not claimed in general
    p = m.default_params(Form.INERTIAL_PP, DEMO_MU, DEMO_L)
    f = [r.f for r in m.run(Form.INERTIAL_PP, demo_quadratic, p, X0, 50).records]
    assert all(b <= a + 1e-15 for a, b in zip(f[5:], f[6:]))


# ------------------------------------------------------------ Bregman AGM

def test_bregman_agm_frozen_values(demo_quadratic):
    p = m.default_params(Form.BREGMAN_AGM, DEMO_MU, DEMO_L)
    assert p.eta == pytest.approx(math.sqrt(5), rel=1e-15)
    s = m.initial_state(Form.BREGMAN_AGM, demo_quadratic, p, X0)
    expected = [
        ([0.13049516849970557497, -0.080650449500462667900],
         [0.68328157299974763569, 0.57770876399966351425],
         [1.9442719099991587856, 2.4164078649987381785]),
        ([-0.14001466274871714810, -0.29543219074804417661],
         [0.26687370800100945724, 0.071130955251451094777],
         [0.60487837125347000925, 0.48026657375536274157]),
    ]
    for x, y, g in expected:
        s = m.bregman_agm_step(demo_quadratic, p, s)
        np.testing.assert_allclose(s.x, x, rtol=1e-13, atol=1e-15)
        np.testing.assert_allclose(s.y, y, rtol=1e-13, atol=1e-15)
        np.testing.assert_allclose(s.g, g, rtol=1e-13, atol=1e-15)


def test_bregman_agm_keeps_gradient_consistent(demo_quartic):
    p = m.default_params(Form.BREGMAN_AGM, 1.0, 4.0).with_(eta=30.0)
    s = m.initial_state(Form.BREGMAN_AGM, demo_quartic, p, X0)
    for _ in range(5):
        s = m.bregman_agm_step(demo_quartic, p, s)
        np.testing.assert_array_equal(s.g, demo_quartic.gradient(s.y))


def test_bregman_agm_rate_matches_iteration_matrix(rng):
    # On a quadratic the method is linear in (x, y, g); its spectral radius
    # is the exact asymptotic decay factor of ‖x_k − x*‖.
    n = 4
    H = random_spd(rng, n, 0.5, 200.0)
    f = Quadratic(H)
    p = m.default_params(Form.BREGMAN_AGM, f.mu, f.L)
    eta, tau, a = p.eta, p.tau, p.alpha
    eye, zero = np.eye(n), np.zeros((n, n))
    Y = np.hstack([eye, tau * eye, -(a / eta) * eye]) / (1 + tau)  # y_new from (x, y, g)
    G = H @ Y
    X = np.hstack([eye, zero, zero]) - G / eta
    M = np.vstack([X, Y, G])
    rho = max(abs(np.linalg.eigvals(M)))
    tr = m.run(Form.BREGMAN_AGM, f, p, rng.standard_normal(n), 150)
    d = np.linalg.norm(tr.field("x"), axis=1)
    slope = np.polyfit(np.arange(50, 151), np.log(d[50:151]), 1)[0]
    assert math.exp(slope) == pytest.approx(rho, abs=0.01)
    assert rho < 1


# ------------------------------------------------------------- heavy ball

def test_heavy_ball_zero_momentum_is_gradient_descent(demo_quadratic):
    y = np.array([0.3, -0.8])
    s = m.heavy_ball_step(demo_quadratic, 0.0, 0.1, m.HeavyBallState(y, np.array([9.0, 9.0])))
    np.testing.assert_allclose(s.y, y - 0.1 * demo_quadratic.gradient(y), rtol=1e-15)
    np.testing.assert_array_equal(s.y_prev, y)


def test_bregman_agm_without_extrapolation_is_heavy_ball(demo_quadratic):
    p = m.default_params(Form.BREGMAN_AGM, DEMO_MU, DEMO_L).with_(alpha=0.0)
    ys = m.run(Form.BREGMAN_AGM, demo_quadratic, p, X0, 101).field("y")
    beta = p.tau / (1 + p.tau)
    step = (1 - beta) / p.eta
    for k in range(2, 102):
        pred = m.heavy_ball_step(demo_quadratic, beta, step, m.HeavyBallState(ys[k - 1], ys[k - 2])).y
        assert np.max(np.abs(ys[k] - pred)) <= 1e-10
        s = m.bregman_heavy_ball_step(demo_quadratic, p, m.HeavyBallState(ys[k - 1], ys[k - 2]))
        np.testing.assert_array_equal(s.y, pred)


def test_heavy_ball_converges(demo_quadratic):
    p = m.default_params(Form.HEAVY_BALL, DEMO_MU, DEMO_L)
    tr = m.run(Form.HEAVY_BALL, demo_quadratic, p, X0, 500)
    errs = np.linalg.norm(tr.field("y"), axis=1)
    assert errs.min() <= 1e-8
    assert np.argmax(errs <= 1e-8) <= 500


# ------------------------------------------------ fixed points, all forms

@pytest.mark.parametrize("form", list(Form), ids=str)
def test_every_stepper_is_stationary_at_minimizer(form):
    xs = np.array([0.4, -1.1])
    f = Quadratic(DEMO_H, xs)
    p = m.default_params(form, DEMO_MU, DEMO_L)
    s = m.initial_state(form, f, p, xs)
    nxt = m.STEPPERS[form](f, p, s)
    for a, b in zip(nxt, s):
        np.testing.assert_allclose(a, b, atol=1e-14)


@pytest.mark.parametrize("form", list(Form), ids=str)
def test_every_form_converges(form, demo_quadratic):
    p = m.default_params(form, DEMO_MU, DEMO_L)
    tr = m.run(form, demo_quadratic, p, X0, 200)
    assert tr.final.grad_norm <= 1e-8


# ------------------------------------------------------------ state maps

def test_identity_map_returns_input():
    s = m.SutskeverState(X0, np.zeros(2))
    p = m.default_params(Form.SUTSKEVER, 1.0, 4.0)
    assert m.map_state(Form.SUTSKEVER, Form.SUTSKEVER, s, p) is s


def test_modern_momentum_from_sutskever():
    p = m.default_params(Form.SUTSKEVER, 1.0, 4.0)
    s = m.SutskeverState(np.array([1.0, 2.0]), np.array([0.5, 0.0]))
    out = m.map_state(Form.SUTSKEVER, Form.MODERN, s, p)
    np.testing.assert_allclose(out.p, [-2.0, 0.0], rtol=1e-15)
    np.testing.assert_allclose(out.x, s.x + p.beta * s.p, rtol=1e-15)


vec2 = arrays(float, 2, elements=st.floats(-5, 5, allow_nan=False))


@given(vec2, vec2, st.floats(1.5, 1e4))
@pytest.mark.parametrize("form", [f for f in m.AGM_FORMS if f is not Form.FORM_II], ids=str)
def test_hub_round_trip(form, x, x_prev, kappa):
    p = m.default_params(Form.FORM_II, 1.0, kappa)
    hub = m.FormIIState(x, x_prev, x + p.beta * (x - x_prev))
    back = m.to_hub(form, m.from_hub(form, hub, p), p)
    scale = 1 + np.max(np.abs(np.concatenate([x, x_prev]))) * kappa
    for a, b in zip(back, hub):
        assert np.max(np.abs(a - b)) <= 1e-12 * scale


@pytest.mark.parametrize("form", m.AGM_FORMS, ids=str)
def test_hub_without_momentum_keeps_x_and_y(form):
    # β = 0: the hub's x_prev carries no information, only (x, y) survive
    p = m.default_params(Form.FORM_II, 2.0, 2.0)
    hub = m.FormIIState(X0, np.zeros(2), X0.copy())
    back = m.to_hub(form, m.from_hub(form, hub, p), p)
    np.testing.assert_allclose(back.x, X0, atol=1e-15)
    np.testing.assert_allclose(back.y, X0, atol=1e-15)


@given(vec2, vec2)
def test_sutskever_round_trip(x, q):
    p = m.default_params(Form.FORM_II, 1.0, 9.0)
    hub = m.FormIIState(x, q, x + p.beta * (x - q))
    s = m.map_state(Form.FORM_II, Form.SUTSKEVER, hub, p)
    back = m.map_state(Form.SUTSKEVER, Form.FORM_II, s, p)
    for a, b in zip(back, hub):
        assert np.max(np.abs(a - b)) <= 1e-12 * (1 + np.max(np.abs(hub)))


@pytest.mark.parametrize("form", m.AGM_FORMS, ids=str)
def test_mapping_commutes_with_stepping(form, demo_quadratic):
    ref = m.default_params(Form.FORM_II, DEMO_MU, DEMO_L)
    p = m.equivalence_params(form, DEMO_MU, DEMO_L)
    hub = m.FormIIState(X0, np.array([0.5, 1.5]), X0 + ref.beta * np.array([0.5, -0.5]))
    s = m.from_hub(form, hub, ref)
    for _ in range(100):
        hub = m.nesterov_form_ii_step(demo_quadratic, ref, hub)
        s = m.STEPPERS[form](demo_quadratic, p, s)
        h = m.to_hub(form, s, ref)
        assert np.max(np.abs(h.x - hub.x)) <= 1e-9
        assert np.max(np.abs(h.y - hub.y)) <= 1e-9


def test_form_i_matches_form_ii(demo_quadratic):
    p1 = m.default_params(Form.FORM_I, DEMO_MU, DEMO_L)
    p2 = m.default_params(Form.FORM_II, DEMO_MU, DEMO_L)
    a = m.run(Form.FORM_I, demo_quadratic, p1, X0, 100).field("x")
    b = m.run(Form.FORM_II, demo_quadratic, p2, X0, 100).field("x")
    assert np.max(np.abs(a - b)) <= 1e-9


def test_modern_iterates_are_extrapolation_points(demo_quadratic):
    p = m.default_params(Form.FORM_II, DEMO_MU, DEMO_L)
    a = m.run(Form.MODERN, demo_quadratic, p, X0, 100).field("x")
    b = m.run(Form.FORM_II, demo_quadratic, p, X0, 100).field("y")
    assert np.max(np.abs(a - b)) <= 1e-9


def test_bregman_agm_defaults_match_two_sequence_form(demo_quadratic):
    p = m.default_params(Form.BREGMAN_AGM, DEMO_MU, DEMO_L)
    q = m.params_matching_bregman(p)
    hub = m.FormIIState(X0, X0.copy(), X0.copy())
    s = m.from_hub(Form.BREGMAN_AGM, hub, q)
    for _ in range(100):
        hub = m.nesterov_form_ii_step(demo_quadratic, q, hub)
        s = m.bregman_agm_step(demo_quadratic, p, s)
        h = m.to_hub(Form.BREGMAN_AGM, s, q)
        assert np.max(np.abs(h.y - hub.y)) <= 1e-9
        assert np.max(np.abs(h.x - hub.x)) <= 1e-9


def test_inertial_primal_dual_map_round_trip(demo_quadratic):
    p = m.default_params(Form.INERTIAL_PP, DEMO_MU, DEMO_L)
    s = m.PrimalDualState(X0, demo_quadratic.gradient(X0))
    back = m.map_state(Form.INERTIAL_PP, Form.PRIMAL_DUAL_PP,
                       m.map_state(Form.PRIMAL_DUAL_PP, Form.INERTIAL_PP, s, p), p)
    for a, b in zip(back, s):
        np.testing.assert_allclose(a, b, atol=1e-15)


def test_unsupported_maps_raise():
    p = m.default_params(Form.FORM_II, 1.0, 4.0)
    with pytest.raises(UnsupportedOperation):
        m.map_state(Form.HEAVY_BALL, Form.FORM_II, m.HeavyBallState(X0, X0), p)
    with pytest.raises(UnsupportedOperation):
        m.map_state(Form.INERTIAL_PP, Form.BREGMAN_AGM, m.InertialState(X0, X0), p)
    with pytest.raises(UnsupportedOperation):
        m.to_hub(Form.PROX_POINT, m.ProxPointState(X0), p)


# ------------------------------------------------------------ equivalence

def test_equivalence_suite_passes(demo_quadratic):
    rep = m.run_equivalence(demo_quadratic, X0, k_max=100)
    assert rep.passed and rep.max_deviation <= 1e-9
    assert rep.deviation.shape == (7, 7)
    assert rep.culprit() is None
    d = rep.to_dict()
    assert d["pass"] and d["failures"] == []


def test_equivalence_suite_detects_perturbation(demo_quadratic):
    p = m.default_params(Form.FORM_II, DEMO_MU, DEMO_L)
    rep = m.run_equivalence(demo_quadratic, X0, overrides={Form.FORM_II: p.with_(beta=p.beta + 1e-3)})
    assert not rep.passed
    assert rep.culprit() is Form.FORM_II
    assert min(rep.first_failure.values()) == 1


@given(st.integers(2, 6), st.floats(1.0, 1e3), st.integers(0, 2**32 - 1))
def test_equivalence_on_random_quadratics(n, kappa, seed):
    r = np.random.default_rng(seed)
    f = Quadratic(random_spd(r, n, 1.0, kappa), r.standard_normal(n))
    x0 = f.x_star + r.standard_normal(n)
    rep = m.run_equivalence(f, x0, k_max=60)
    assert rep.max_deviation <= 1e-9 * (1 + np.max(np.abs(x0)))


def test_equivalence_on_quartic_with_nominal_constants(demo_quartic):
    # the forms coincide on any smooth f; μ, L only set the constants
    rep = m.run_equivalence(demo_quartic, [0.3, 0.2], k_max=50, mu=1.0, L=40.0)
    assert rep.max_deviation <= 1e-9


# ------------------------------------------------------------- run harness

def test_run_single_step_matches_manual(demo_quadratic):
    p = m.default_params(Form.SUTSKEVER, DEMO_MU, DEMO_L)
    tr = m.run(Form.SUTSKEVER, demo_quadratic, p, X0, 1)
    s = m.sutskever_step(demo_quadratic, p, m.initial_state(Form.SUTSKEVER, demo_quadratic, p, X0))
    assert len(tr) == 2 and [r.k for r in tr.records] == [0, 1]
    for a, b in zip(tr.final.state, s):
        np.testing.assert_array_equal(a, b)
    assert tr.final.f == demo_quadratic.value(s.x)


@pytest.mark.parametrize("form", list(Form), ids=str)
def test_run_from_minimizer_stays(form):
    xs = np.array([2.0, -1.0])
    f = Quadratic(DEMO_H, xs)
    tr = m.run(form, f, m.default_params(form, DEMO_MU, DEMO_L), xs, 20)
    assert max(r.grad_norm for r in tr.records) <= 1e-12


def test_run_rejects_zero_steps(demo_quadratic):
    with pytest.raises(ValueError):
        m.run(Form.FORM_II, demo_quadratic, m.default_params(Form.FORM_II, 1, 4), X0, 0)


def test_agm_and_prox_paths_differ(demo_quadratic):
    a = m.run(Form.BREGMAN_AGM, demo_quadratic,
              m.default_params(Form.BREGMAN_AGM, DEMO_MU, DEMO_L), X0, 100).points()
    b = m.run(Form.PROX_POINT, demo_quadratic,
              m.default_params(Form.PROX_POINT, DEMO_MU, DEMO_L), X0, 100).points()
    assert m.path_divergence(a, b) > 0.01


def test_trajectory_columns_and_rows(demo_quadratic):
    p = m.default_params(Form.BREGMAN_AGM, DEMO_MU, DEMO_L)
    tr = m.run(Form.BREGMAN_AGM, demo_quadratic, p, X0, 3)
    cols = tr.columns()
    assert cols == ["k", "f", "grad_norm", "x_1", "x_2", "y_1", "y_2", "g_1", "g_2"]
    rows = list(tr.rows())
    assert len(rows) == 4 and all(len(r) == len(cols) for r in rows)
    ip = m.run(Form.INERTIAL_PP, demo_quadratic, m.default_params(Form.INERTIAL_PP, 1, 4), X0, 1)
    assert ip.columns()[3:] == ["x_1", "x_2", "z_1", "z_2", "g_1", "g_2"]


def test_run_on_quartic_uses_newton(demo_quartic):
    p = m.default_params(Form.PROX_POINT, 1.0, 4.0)
    tr = m.run(Form.PROX_POINT, demo_quartic, p, X0, 20)
    f = [r.f for r in tr.records]
    assert all(b < a for a, b in zip(f, f[1:]))
