"""Discrete proximal, momentum and accelerated gradient methods.

Every method is a pure stepper ``state -> state`` on a small named tuple.
The seven accelerated forms are related by exact state maps that all pass
through the two-sequence form (``Form.FORM_II``), whose state
``(x, x_prev, y)`` always satisfies ``y = x + β(x − x_prev)``.

Parameter conventions
---------------------
``eta`` is an inverse step size, ``tau`` the Bregman penalty weight, ``alpha``
the extrapolation weight (Nesterov's α in form I), ``beta`` the momentum,
``gamma`` the form-I constant or the AT step size and ``theta`` the AT mixing
weight.
"""

import math
from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from ._newton import damped_newton
from .errors import ConstructionError, UnsupportedOperation
from .objectives import Quadratic

__all__ = [
    "Form", "AGM_FORMS", "HyperParams", "default_params", "equivalence_params",
    "params_matching_bregman", "heavy_ball_constants",
    "ProxPointState", "PrimalDualState", "InertialState", "BregmanAGMState",
    "HeavyBallState", "FormIState", "FormIIState", "SutskeverState",
    "ModernState", "ATState", "LanState",
    "prox_point_step", "primal_dual_pp_step", "inertial_pp_step",
    "bregman_agm_step", "heavy_ball_step", "bregman_heavy_ball_step",
    "nesterov_form_i_step", "nesterov_form_ii_step", "sutskever_step",
    "modern_momentum_step", "auslender_teboulle_step", "lan_step",
    "STEPPERS", "initial_state", "map_state", "to_hub", "from_hub",
    "primary_point", "Record", "Trajectory", "run",
    "EquivalenceReport", "run_equivalence", "path_divergence",
]

NEWTON_TOL = 1e-12


class Form(str, Enum):
    PROX_POINT = "prox_point"
    PRIMAL_DUAL_PP = "primal_dual_pp"
    INERTIAL_PP = "inertial_pp"
    BREGMAN_AGM = "bregman_agm"
    HEAVY_BALL = "heavy_ball"
    FORM_I = "nesterov_form_i"
    FORM_II = "nesterov_form_ii"
    SUTSKEVER = "sutskever"
    MODERN = "modern_momentum"
    AT = "auslender_teboulle"
    LAN = "lan"

    def __str__(self):
        return self.value


AGM_FORMS = (Form.FORM_I, Form.FORM_II, Form.SUTSKEVER, Form.MODERN,
             Form.AT, Form.LAN, Form.BREGMAN_AGM)


@dataclass(frozen=True)
class HyperParams:
    """Constants shared by the method forms.

    Only the fields a form reads matter for that form; the rest are filled
    with the standard values so that one record can be echoed to files.
    """

    mu: float
    L: float
    eta: float
    tau: float
    alpha: float
    beta: float
    gamma: float
    theta: float

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConstructionError(f"parameter {f.name} must be a finite number, got {v!r}")

    def with_(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}


def _check_mu_L(mu, L):
    if not (math.isfinite(mu) and math.isfinite(L)) or not 0 < mu <= L:
        raise ConstructionError(f"need 0 < mu <= L, got mu={mu!r}, L={L!r}")


def _momentum(mu, L):
    sl, sm = math.sqrt(L), math.sqrt(mu)
    return (sl - sm) / (sl + sm)


def heavy_ball_constants(mu, L):
    """Momentum β = (√L−√μ)/(√L+√μ) and step γ = 4/(√L+√μ)²."""
    _check_mu_L(mu, L)
    return _momentum(mu, L), 4.0 / (math.sqrt(L) + math.sqrt(mu)) ** 2


def default_params(form, mu, L):
    """Standard constants for ``form`` on a μ-strongly convex, L-smooth f.

    Shared by all forms: β = (√L−√μ)/(√L+√μ), θ = 1 − β, η = √(μL).
    Per form:

    * Bregman AGM: τ = L/η, α = τ/(1+τ).
    * prox point, primal-dual and inertial forms: τ = 1/η, α = 1.
    * form I: α = √(μ/L), γ = μ.
    * AT: γ = 1/L.
    * Lan: η = θL, τ = (1−θ)/θ, α = 1 − θ.
    * heavy ball: γ = 4/(√L+√μ)², the step size.
    """
    form = Form(form)
    _check_mu_L(mu, L)
    beta = _momentum(mu, L)
    theta = 1.0 - beta
    eta = math.sqrt(mu * L)
    base = dict(mu=float(mu), L=float(L), eta=eta, beta=beta, theta=theta,
                tau=L / eta, alpha=(L / eta) / (1 + L / eta), gamma=1.0 / L)
    if form in (Form.PROX_POINT, Form.PRIMAL_DUAL_PP, Form.INERTIAL_PP):
        base.update(tau=1.0 / eta, alpha=1.0)
    elif form is Form.FORM_I:
        base.update(alpha=math.sqrt(mu / L), gamma=float(mu))
    elif form is Form.LAN:
        base.update(eta=theta * L, tau=(1 - theta) / theta, alpha=1 - theta)
    elif form is Form.HEAVY_BALL:
        base.update(gamma=heavy_ball_constants(mu, L)[1])
    return HyperParams(**base)


def equivalence_params(form, mu, L):
    """Constants under which the seven accelerated forms coincide.

    Identical to :func:`default_params` except for the Bregman AGM, which
    takes Lan's constants (η = θL, τ = (1−θ)/θ, α = 1 − θ).
    """
    form = Form(form)
    if form is Form.BREGMAN_AGM:
        return default_params(Form.LAN, mu, L)
    return default_params(form, mu, L)


def params_matching_bregman(params):
    """Two-sequence-family constants reproducing a Bregman AGM parameter set.

    The Bregman AGM with (η, τ, α = τ/(1+τ)) is the two-sequence method with
    momentum β' = τ/(1+τ) and step 1/L' where L' = η(1+τ). The returned μ'
    is chosen so that β' = (√L'−√μ')/(√L'+√μ').
    """
    if not math.isclose(params.alpha, params.tau / (1 + params.tau), rel_tol=1e-12):
        raise ConstructionError("the two-sequence form needs alpha = tau/(1+tau)")
    theta = 1.0 / (1.0 + params.tau)
    beta = 1.0 - theta
    L = params.eta / theta
    mu = L * (theta / (1.0 + beta)) ** 2
    return HyperParams(mu=mu, L=L, eta=params.eta, tau=params.tau, alpha=params.alpha,
                       beta=beta, gamma=1.0 / L, theta=theta)


# ----------------------------------------------------------------- states

class ProxPointState(NamedTuple):
    x: np.ndarray


class PrimalDualState(NamedTuple):
    x: np.ndarray
    g: np.ndarray


class InertialState(NamedTuple):
    z: np.ndarray
    g: np.ndarray


class BregmanAGMState(NamedTuple):
    x: np.ndarray
    y: np.ndarray
    g: np.ndarray


class HeavyBallState(NamedTuple):
    y: np.ndarray
    y_prev: np.ndarray


class FormIState(NamedTuple):
    x: np.ndarray
    v: np.ndarray
    y: np.ndarray


class FormIIState(NamedTuple):
    x: np.ndarray
    x_prev: np.ndarray
    y: np.ndarray


class SutskeverState(NamedTuple):
    x: np.ndarray
    p: np.ndarray


class ModernState(NamedTuple):
    x: np.ndarray
    p: np.ndarray


class ATState(NamedTuple):
    x_hat: np.ndarray
    z: np.ndarray
    y: np.ndarray


class LanState(NamedTuple):
    x: np.ndarray
    x_prev: np.ndarray
    x_under: np.ndarray


STATE_TYPES = {
    Form.PROX_POINT: ProxPointState,
    Form.PRIMAL_DUAL_PP: PrimalDualState,
    Form.INERTIAL_PP: InertialState,
    Form.BREGMAN_AGM: BregmanAGMState,
    Form.HEAVY_BALL: HeavyBallState,
    Form.FORM_I: FormIState,
    Form.FORM_II: FormIIState,
    Form.SUTSKEVER: SutskeverState,
    Form.MODERN: ModernState,
    Form.AT: ATState,
    Form.LAN: LanState,
}


# -------------------------------------------------------------- steppers

def _arr(x):
    return np.asarray(x, dtype=float)


def _solve_implicit(obj, c, rhs):
    """Solve y + c·∇f(y) = rhs for y."""
    if isinstance(obj, Quadratic):
        # (I + cH) y = rhs + cH x*
        return obj.x_star + obj.solve_shifted(1.0 / c, (rhs - obj.x_star) / c)
    return damped_newton(
        lambda y: y + c * obj.gradient(y) - rhs,
        lambda y: np.eye(obj.n) + c * obj.hessian(y),
        rhs, tol=NEWTON_TOL, scale=max(1.0, float(np.linalg.norm(rhs))),
    )


def prox_point_step(obj, eta, x_prev):
    """x = argmin f(x) + (η/2)‖x − x_prev‖², i.e. x + ∇f(x)/η = x_prev."""
    if not eta > 0:
        raise ValueError("eta must be positive")
    return _solve_implicit(obj, 1.0 / eta, _arr(x_prev))


def primal_dual_pp_step(obj, eta, state):
    """Proximal point step carried out on the dual variable.

    g minimizes f*(g) − ⟨g, x_prev − g_prev/η⟩ + ‖g − g_prev‖²/(2η), so
    ∇f*(g) + g/η = x_prev; then x = x_prev − g/η. The subproblem is solved
    in the variable y = ∇f*(g), which turns it into y + ∇f(y)/η = x_prev.
    """
    if not eta > 0:
        raise ValueError("eta must be positive")
    x_prev, _ = state
    y = _solve_implicit(obj, 1.0 / eta, _arr(x_prev))
    g = obj.gradient(y)
    return PrimalDualState(x_prev - g / eta, g)


def inertial_pp_step(obj, params, state, geometry="euclidean"):
    """Proximal point in the variable z = x − (α/η)g.

    ``geometry="euclidean"`` penalizes (τ/2)‖g − g_prev‖², which is the
    proximal point method at τ = 1/η. ``geometry="bregman"`` penalizes
    τ·B_{f*}(g, g_prev), which is the Bregman AGM. Either way
    z ← z − g/η − (α/η)(g − g_prev).
    """
    z_prev, g_prev = _arr(state[0]), _arr(state[1])
    eta, tau, alpha = params.eta, params.tau, params.alpha
    if geometry == "euclidean":
        # ∇f*(g) + τ(g − g_prev) = z_prev; with y = ∇f*(g): y + τ∇f(y) = z_prev + τ g_prev
        y = _solve_implicit(obj, tau, z_prev + tau * g_prev)
    elif geometry == "bregman":
        y = (z_prev + tau * obj.conjugate_gradient(g_prev)) / (1 + tau)
    else:
        raise ValueError(f"unknown geometry {geometry!r}")
    g = obj.gradient(y)
    z = z_prev - g / eta - (alpha / eta) * (g - g_prev)
    return InertialState(z, g)


def bregman_agm_step(obj, params, state):
    """One step of the accelerated method in Bregman form."""
    x, y, g = state
    eta, tau, alpha = params.eta, params.tau, params.alpha
    y = (x - (alpha / eta) * g + tau * y) / (1 + tau)
    g = obj.gradient(y)
    x = x - g / eta
    return BregmanAGMState(x, y, g)


def heavy_ball_step(obj, beta, step, state):
    """y ← y − step·∇f(y) + β(y − y_prev)."""
    y, y_prev = _arr(state[0]), _arr(state[1])
    return HeavyBallState(y - step * obj.gradient(y) + beta * (y - y_prev), y)


def bregman_heavy_ball_step(obj, params, state):
    """Heavy ball with momentum β = τ/(1+τ) and step (1 − β)/η.

    These are the constants of the Bregman AGM with α = 0.
    """
    beta = params.tau / (1 + params.tau)
    return heavy_ball_step(obj, beta, (1 - beta) / params.eta, state)


def nesterov_form_i_step(obj, params, state):
    """Three-sequence form; the stored y is the next extrapolation point."""
    x, v, _ = state
    a, gm, mu, L = params.alpha, params.gamma, params.mu, params.L
    y = (a * gm * v + gm * x) / (a * mu + gm)
    gy = obj.gradient(y)
    x = y - gy / L
    v = (1 - a) * v + (a * mu / gm) * y - (a / gm) * gy
    return FormIState(x, v, (a * gm * v + gm * x) / (a * mu + gm))


def nesterov_form_ii_step(obj, params, state):
    x, _, y = state
    x_new = y - obj.gradient(y) / params.L
    return FormIIState(x_new, x, x_new + params.beta * (x_new - x))


def sutskever_step(obj, params, state):
    x, p = state
    p = params.beta * p - obj.gradient(x + params.beta * p) / params.L
    return SutskeverState(x + p, p)


def modern_momentum_step(obj, params, state):
    x, p = state
    gx = obj.gradient(x)
    p = params.beta * p + gx
    return ModernState(x - (gx + params.beta * p) / params.L, p)


def auslender_teboulle_step(obj, params, state):
    """AT form; the stored y is the next extrapolation point."""
    x_hat, z, _ = state
    th = params.theta
    y = (1 - th) * x_hat + th * z
    z = z - (params.gamma / th) * obj.gradient(y)
    x_hat = (1 - th) * x_hat + th * z
    return ATState(x_hat, z, (1 - th) * x_hat + th * z)


def lan_step(obj, params, state):
    x, x_prev, x_under = state
    x_tilde = params.alpha * (x - x_prev) + x
    x_under = (x_tilde + params.tau * x_under) / (1 + params.tau)
    return LanState(x - obj.gradient(x_under) / params.eta, x, x_under)


STEPPERS = {
    Form.PROX_POINT: lambda obj, p, s: ProxPointState(prox_point_step(obj, p.eta, s.x)),
    Form.PRIMAL_DUAL_PP: lambda obj, p, s: primal_dual_pp_step(obj, p.eta, s),
    Form.INERTIAL_PP: inertial_pp_step,
    Form.BREGMAN_AGM: bregman_agm_step,
    Form.HEAVY_BALL: lambda obj, p, s: heavy_ball_step(obj, p.beta, p.gamma, s),
    Form.FORM_I: nesterov_form_i_step,
    Form.FORM_II: nesterov_form_ii_step,
    Form.SUTSKEVER: sutskever_step,
    Form.MODERN: modern_momentum_step,
    Form.AT: auslender_teboulle_step,
    Form.LAN: lan_step,
}


def initial_state(form, obj, params, x0):
    """Starting state at x0 with all momenta zero and g = ∇f(x0)."""
    form = Form(form)
    x0 = _arr(x0).copy()
    zero = np.zeros_like(x0)
    if form is Form.PROX_POINT:
        return ProxPointState(x0)
    if form is Form.PRIMAL_DUAL_PP:
        return PrimalDualState(x0, obj.gradient(x0))
    if form is Form.INERTIAL_PP:
        g0 = obj.gradient(x0)
        return InertialState(x0 - (params.alpha / params.eta) * g0, g0)
    if form is Form.BREGMAN_AGM:
        return BregmanAGMState(x0, x0.copy(), obj.gradient(x0))
    if form is Form.HEAVY_BALL:
        return HeavyBallState(x0, x0.copy())
    if form in (Form.SUTSKEVER, Form.MODERN):
        return STATE_TYPES[form](x0, zero)
    return STATE_TYPES[form](x0, x0.copy(), x0.copy())


# ------------------------------------------------------------ state maps

def to_hub(form, state, params):
    """Map an accelerated-form state to the two-sequence state (x, x_prev, y).

    Only ``params.beta`` and ``params.L`` are read; every other constant is
    derived from them. When β = 0 the hub's x_prev carries no information
    and is set to x.
    """
    form = Form(form)
    b = params.beta
    th = 1.0 - b
    if form is Form.FORM_II:
        return FormIIState(*map(_arr, state))
    if form is Form.FORM_I:
        x, v, _ = map(_arr, state)
        a = (1 - b) / (1 + b)
        x_prev = x.copy() if a == 1 else (x - a * v) / (1 - a)
        return FormIIState(x, x_prev, x + b * (x - x_prev))
    if form is Form.SUTSKEVER:
        x, p = map(_arr, state)
        return FormIIState(x, x - p, x + b * p)
    if form is Form.MODERN:
        x_mod, p_mod = map(_arr, state)
        p = -p_mod / params.L
        x = x_mod - b * p
        return FormIIState(x, x - p, x_mod)
    if form is Form.AT:
        x_hat, z, _ = map(_arr, state)
        x_prev = x_hat.copy() if b == 0 else x_hat - (th / b) * (z - x_hat)
        return FormIIState(x_hat, x_prev, b * x_hat + th * z)
    if form is Form.LAN:
        x, x_prev, x_under = map(_arr, state)
        x_hat = x_under + th * (x - x_prev)
        return to_hub(Form.AT, ATState(x_hat, x, b * x_hat + th * x), params)
    if form is Form.BREGMAN_AGM:
        x, y, g = map(_arr, state)
        eta = th * params.L
        return to_hub(Form.LAN, LanState(x, x + g / eta, y), params)
    raise UnsupportedOperation(f"no state map for form {form}")


def from_hub(form, hub, params):
    """Inverse of :func:`to_hub` (up to future-equivalence for Lan/Bregman)."""
    form = Form(form)
    x, x_prev, y = map(_arr, hub)
    b = params.beta
    th = 1.0 - b
    p = x - x_prev
    if form is Form.FORM_II:
        return FormIIState(x, x_prev, y)
    if form is Form.FORM_I:
        a = (1 - b) / (1 + b)
        v = x_prev + p / a
        return FormIState(x, v, (a * v + x) / (1 + a))
    if form is Form.SUTSKEVER:
        return SutskeverState(x, p)
    if form is Form.MODERN:
        return ModernState(x + b * p, -params.L * p)
    if form is Form.AT:
        z = x + (b / th) * p
        return ATState(x, z, b * x + th * z)
    if form is Form.LAN:
        # The hub fixes only the future; any Lan state with the same next
        # extrapolation point is equivalent. Take x_prev = z and x̲ = x̂.
        z = from_hub(Form.AT, hub, params).z
        return LanState(z, z.copy(), x)
    if form is Form.BREGMAN_AGM:
        lan = from_hub(Form.LAN, hub, params)
        eta = th * params.L
        return BregmanAGMState(lan.x, lan.x_under, eta * (lan.x_prev - lan.x))
    raise UnsupportedOperation(f"no state map for form {form}")


def map_state(from_form, to_form, state, params, obj=None):
    """Carry a state between forms so that stepping either side commutes.

    The seven accelerated forms map through the two-sequence hub. Inertial
    and Bregman AGM states convert through z = x − (α/η)g; going from
    inertial to Bregman AGM needs ``obj`` to recover y = ∇f*(g).
    """
    from_form, to_form = Form(from_form), Form(to_form)
    if from_form is to_form:
        return state
    if {from_form, to_form} == {Form.INERTIAL_PP, Form.BREGMAN_AGM}:
        k = params.alpha / params.eta
        if from_form is Form.BREGMAN_AGM:
            x, _, g = state
            return InertialState(_arr(x) - k * _arr(g), _arr(g))
        if obj is None:
            raise UnsupportedOperation("inertial to Bregman AGM map needs the objective")
        z, g = map(_arr, state)
        return BregmanAGMState(z + k * g, obj.conjugate_gradient(g), g)
    if {from_form, to_form} == {Form.PRIMAL_DUAL_PP, Form.INERTIAL_PP}:
        k = params.alpha / params.eta
        a, g = map(_arr, state)
        if from_form is Form.PRIMAL_DUAL_PP:
            return InertialState(a - k * g, g)
        return PrimalDualState(a + k * g, g)
    if from_form in AGM_FORMS and to_form in AGM_FORMS:
        return from_hub(to_form, to_hub(from_form, state, params), params)
    raise UnsupportedOperation(f"no state map from {from_form} to {to_form}")


def primary_point(form, state, params=None):
    """The point at which a form's objective value is reported."""
    form = Form(form)
    if form is Form.INERTIAL_PP:
        if params is None:
            raise UnsupportedOperation("inertial primal point needs params")
        return _arr(state.z) + (params.alpha / params.eta) * _arr(state.g)
    return _arr(state[0])


# ------------------------------------------------------------ trajectories

class Record(NamedTuple):
    k: int
    state: tuple
    f: float
    grad_norm: float


@dataclass(frozen=True)
class Trajectory:
    form: Form
    params: HyperParams
    records: tuple

    def __len__(self):
        return len(self.records)

    @property
    def final(self):
        return self.records[-1]

    def points(self):
        return np.array([primary_point(self.form, r.state, self.params) for r in self.records])

    def field(self, name):
        """Stack one state field over all records, shape (K+1, n)."""
        return np.array([getattr(r.state, name) for r in self.records])

    def _extra_fields(self):
        names = STATE_TYPES[self.form]._fields
        # the first field is the reported point except in the inertial form
        return names if self.form is Form.INERTIAL_PP else names[1:]

    def columns(self):
        """``k, f, grad_norm, x_1..x_n`` then each remaining state field."""
        n = len(self.records[0].state[0])
        cols = ["k", "f", "grad_norm"] + [f"x_{i + 1}" for i in range(n)]
        for name in self._extra_fields():
            cols += [f"{name}_{i + 1}" for i in range(n)]
        return cols

    def rows(self):
        extra = self._extra_fields()
        for r in self.records:
            x = primary_point(self.form, r.state, self.params)
            rest = [np.asarray(getattr(r.state, name), dtype=float) for name in extra]
            yield [r.k, r.f, r.grad_norm, *x.tolist(),
                   *(np.concatenate(rest).tolist() if rest else [])]


def run(form, obj, params, x0, k_max, state0=None, step_kwargs=None):
    """Iterate ``form`` for ``k_max`` steps, recording index 0 as the start."""
    form = Form(form)
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    step = STEPPERS[form]
    kw = step_kwargs or {}
    state = initial_state(form, obj, params, x0) if state0 is None else state0

    def record(k, s):
        x = primary_point(form, s, params)
        return Record(k, s, obj.value(x), float(np.linalg.norm(obj.gradient(x))))

    records = [record(0, state)]
    for k in range(1, k_max + 1):
        state = step(obj, params, state, **kw)
        records.append(record(k, state))
    return Trajectory(form, params, tuple(records))


# ------------------------------------------------------------- equivalence

@dataclass(frozen=True)
class EquivalenceReport:
    """Pairwise agreement of the accelerated forms on the hub variables.

    Attributes
    ----------
    forms : tuple of Form
    deviation : ndarray
        ``deviation[i, j]`` is the max over k of ‖hub_i − hub_j‖_∞ over
        the hub's (x, y).
    first_failure : dict
        ``(form_i, form_j) -> k`` for pairs exceeding ``tol``.
    """

    forms: tuple
    deviation: np.ndarray
    tol: float
    first_failure: dict
    k_max: int

    @property
    def max_deviation(self):
        return float(self.deviation.max())

    @property
    def passed(self):
        return not self.first_failure

    def culprit(self):
        """The form shared by every failing pair, if there is exactly one."""
        if not self.first_failure:
            return None
        common = set(self.forms)
        for pair in self.first_failure:
            common &= set(pair)
        return next(iter(common)) if len(common) == 1 else None

    def to_dict(self):
        return {
            "forms": [str(f) for f in self.forms],
            "deviation": self.deviation.tolist(),
            "tol": self.tol,
            "k_max": self.k_max,
            "max_deviation": self.max_deviation,
            "pass": self.passed,
            "failures": [{"pair": [str(a), str(b)], "first_k": k}
                         for (a, b), k in self.first_failure.items()],
        }


def run_equivalence(obj, x0, k_max=100, mu=None, L=None, overrides=None, tol=1e-9):
    """Run the seven accelerated forms from one hub start and compare.

    Every form starts from the image of the hub state (x0, x0, x0), steps
    with :func:`equivalence_params` (or ``overrides[form]``) and is mapped
    back to the hub after every step with the unperturbed constants.
    """
    if mu is None or L is None:
        mu, L = obj.mu, obj.lipschitz
    overrides = overrides or {}
    ref = default_params(Form.FORM_II, mu, L)
    x0 = _arr(x0)
    hub0 = FormIIState(x0, x0.copy(), x0.copy())
    forms = AGM_FORMS
    states = {f: from_hub(f, hub0, ref) for f in forms}
    params = {f: overrides.get(f, equivalence_params(f, mu, L)) for f in forms}
    m = len(forms)
    dev = np.zeros((m, m))
    first = {}
    for k in range(k_max + 1):
        if k > 0:
            states = {f: STEPPERS[f](obj, params[f], states[f]) for f in forms}
        hubs = [to_hub(f, states[f], ref) for f in forms]
        flat = [np.concatenate([h.x, h.y]) for h in hubs]
        for i in range(m):
            for j in range(i + 1, m):
                d = float(np.max(np.abs(flat[i] - flat[j])))
                if not math.isfinite(d):
                    d = math.inf
                if d > dev[i, j]:
                    dev[i, j] = dev[j, i] = d
                if d > tol and (forms[i], forms[j]) not in first:
                    first[(forms[i], forms[j])] = k
    return EquivalenceReport(forms, dev, tol, first, k_max)


def path_divergence(a, b):
    """max_k ‖a_k − b_k‖ over the common length of two point sequences."""
    m = min(len(a), len(b))
    return float(np.max(np.linalg.norm(np.asarray(a[:m]) - np.asarray(b[:m]), axis=1)))
