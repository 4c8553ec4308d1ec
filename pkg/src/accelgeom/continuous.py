"""Continuous-time models of the proximal point, accelerated and heavy-ball methods.

States are stacked vectors. The proximal and accelerated ODEs use
u = [z; g] and the heavy-ball ODE uses u = [x; p].
"""

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DivergenceError, UnsupportedOperation
from .methods import HyperParams
from .objectives import Quadratic

__all__ = [
    "OdeKind", "OdeSystem", "ContinuousTrajectory", "DecayEstimate",
    "prox_ode_rhs", "agm_ode_rhs", "heavy_ball_ode_rhs", "rhs",
    "initial_state", "integrate_rk4", "block_implicit_euler_step",
    "decay_rate_estimate", "envelope_ratio",
]


class OdeKind(str, Enum):
    PROX_POINT = "prox_point"
    AGM = "agm"
    HEAVY_BALL = "heavy_ball"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class OdeSystem:
    kind: OdeKind
    obj: object
    params: HyperParams

    def __post_init__(self):
        object.__setattr__(self, "kind", OdeKind(self.kind))
        if self.kind is OdeKind.HEAVY_BALL and not isinstance(self.obj, Quadratic):
            raise UnsupportedOperation("the heavy-ball ODE is defined for quadratics only")

    @property
    def n(self):
        return self.obj.n

    @property
    def u_star(self):
        x_star = self.obj.x_star
        if x_star is None:
            raise UnsupportedOperation("fixed point needs a known minimizer")
        return np.concatenate([x_star, np.zeros(self.n)])

    @property
    def labels(self):
        a, b = ("x", "p") if self.kind is OdeKind.HEAVY_BALL else ("z", "g")
        return [f"{a}_{i + 1}" for i in range(self.n)] + [f"{b}_{i + 1}" for i in range(self.n)]

    def default_dt(self):
        """0.01·min(τ, 1/η)."""
        return 0.01 * min(self.params.tau, 1.0 / self.params.eta)


def _split(sys, u):
    u = np.asarray(u, dtype=float)
    return u[:sys.n], u[sys.n:]


def prox_ode_rhs(sys, u):
    """ġ = (z − ∇f*(g))/τ, then ż = −g/η − (α/η)ġ with that same ġ."""
    z, g = _split(sys, u)
    p = sys.params
    g_dot = (z - sys.obj.conjugate_gradient(g)) / p.tau
    z_dot = -g / p.eta - (p.alpha / p.eta) * g_dot
    return np.concatenate([z_dot, g_dot])


def agm_ode_rhs(sys, u):
    """d/dt ∇f*(g) = (z − ∇f*(g))/τ, solved for ġ with ∇²f*(g)⁻¹ = ∇²f(∇f*(g))."""
    z, g = _split(sys, u)
    p = sys.params
    y = sys.obj.conjugate_gradient(g)
    sys.obj.check_domain(y)
    g_dot = sys.obj.hessian(y) @ (z - y) / p.tau
    z_dot = -g / p.eta - (p.alpha / p.eta) * g_dot
    return np.concatenate([z_dot, g_dot])


def heavy_ball_ode_rhs(sys, u):
    """ẋ = p, ṗ = −(1 − β)p − γH(x − x*)."""
    x, v = _split(sys, u)
    p = sys.params
    return np.concatenate([v, -(1 - p.beta) * v - p.gamma * (sys.obj.H @ (x - sys.obj.x_star))])


_RHS = {
    OdeKind.PROX_POINT: prox_ode_rhs,
    OdeKind.AGM: agm_ode_rhs,
    OdeKind.HEAVY_BALL: heavy_ball_ode_rhs,
}


def rhs(sys, u):
    return _RHS[sys.kind](sys, u)


def initial_state(sys, x0):
    """[x0 − (α/η)g0; g0] with g0 = ∇f(x0), or [x0; 0] for heavy ball.

    The first matches the discrete inertial form started at x0.
    """
    x0 = np.asarray(x0, dtype=float)
    if sys.kind is OdeKind.HEAVY_BALL:
        return np.concatenate([x0, np.zeros_like(x0)])
    g0 = sys.obj.gradient(x0)
    return np.concatenate([x0 - (sys.params.alpha / sys.params.eta) * g0, g0])


@dataclass(frozen=True)
class ContinuousTrajectory:
    t: np.ndarray
    u: np.ndarray
    dt: float
    integrator: str
    kind: OdeKind

    def __len__(self):
        return len(self.t)

    def distances(self, u_star):
        return np.linalg.norm(self.u - np.asarray(u_star, dtype=float), axis=1)

    def columns(self):
        n = self.u.shape[1] // 2
        a, b = ("x", "p") if self.kind is OdeKind.HEAVY_BALL else ("z", "g")
        return ["t"] + [f"{a}_{i + 1}" for i in range(n)] + [f"{b}_{i + 1}" for i in range(n)]

    def rows(self):
        for t, u in zip(self.t, self.u):
            yield [float(t), *u.tolist()]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns())
        for row in self.rows():
            w.writerow([repr(v) for v in row])
        return buf.getvalue()


def integrate_rk4(sys, u0, dt=None, t_max=20.0):
    """Classical fourth-order Runge–Kutta on a uniform grid ending at t_max.

    ``dt`` defaults to ``sys.default_dt()`` and is shrunk so that a whole
    number of steps reaches ``t_max``.

    Raises
    ------
    DivergenceError
        If the state becomes non-finite.
    """
    if dt is None:
        dt = sys.default_dt()
    if not dt > 0 or not t_max > 0:
        raise ValueError("dt and t_max must be positive")
    steps = max(1, math.ceil(t_max / dt - 1e-9))
    h = t_max / steps
    f = _RHS[sys.kind]
    u = np.asarray(u0, dtype=float).copy()
    out = np.empty((steps + 1, u.size))
    out[0] = u
    for i in range(steps):
        k1 = f(sys, u)
        k2 = f(sys, u + 0.5 * h * k1)
        k3 = f(sys, u + 0.5 * h * k2)
        k4 = f(sys, u + h * k3)
        u = u + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(u)):
            raise DivergenceError("non-finite state in RK4 integration", (i + 1) * h)
        out[i + 1] = u
    return ContinuousTrajectory(np.linspace(0.0, t_max, steps + 1), out, h, "rk4", sys.kind)


def block_implicit_euler_step(sys, u, h=1.0):
    """Implicit Euler in g (a Bregman prox against z), explicit in z.

    With y = ∇f*(g) the g-block is y_new = (τy + hz)/(τ + h), g_new = ∇f(y_new);
    then z_new = z − (h/η)g_new − (α/η)(g_new − g).
    """
    if sys.kind is not OdeKind.AGM:
        raise UnsupportedOperation("block-implicit Euler is defined for the AGM ODE")
    if not h > 0:
        raise ValueError("h must be positive")
    z, g = _split(sys, u)
    p = sys.params
    y = sys.obj.conjugate_gradient(g)
    y_new = (p.tau * y + h * z) / (p.tau + h)
    g_new = sys.obj.gradient(y_new)
    z_new = z - (h / p.eta) * g_new - (p.alpha / p.eta) * (g_new - g)
    return np.concatenate([z_new, g_new])


@dataclass(frozen=True)
class DecayEstimate:
    rate: float
    decaying: bool


def decay_rate_estimate(traj, u_star, exclude_fraction=0.05):
    """Largest ρ with ‖u(t) − u*‖ ≤ e^{−ρt}‖u(0) − u*‖ at every sample.

    Samples with t < ``exclude_fraction``·t_max are skipped. ``decaying`` is
    False when the estimate is not positive.
    """
    d = traj.distances(u_star)
    if d[0] == 0:
        return DecayEstimate(math.inf, True)
    t = traj.t
    mask = (t > 0) & (t >= exclude_fraction * t[-1])
    if not np.any(mask):
        raise ValueError("no samples in the fit window")
    with np.errstate(divide="ignore"):
        rates = -np.log(d[mask] / d[0]) / t[mask]
    rate = float(np.min(rates))
    return DecayEstimate(rate, rate > 0)


def envelope_ratio(traj, u_star, rho):
    """max_t ‖u(t) − u*‖ / (e^{−ρt}‖u(0) − u*‖); at most 1 when the envelope holds."""
    d = traj.distances(u_star)
    if d[0] == 0:
        return 0.0 if not np.any(d) else math.inf
    return float(np.max(d / (d[0] * np.exp(-rho * traj.t))))
