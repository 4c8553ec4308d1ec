"""Hessian-manifold primitives generated by a strongly convex function φ.

The generator is any :class:`~accelgeom.objectives.Objective`. Primal
coordinates are points x; dual coordinates are y = ∇φ(x), inverted by
∇φ*. Dual-flat geodesics are straight lines in dual coordinates.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._newton import damped_newton
from .errors import DomainError

__all__ = [
    "GeodesicPath", "divergence", "to_dual_coords", "from_dual_coords",
    "tangent_to_dual", "dual_geodesic", "euclidean_segment", "dual_exp",
    "dual_connection_coeffs", "geodesic_ode_residual", "bregman_prox",
]

CONNECTION_FD_STEP = 1e-4
PROX_TOL = 1e-12


def divergence(phi, x, y):
    """B_φ(x, y) = φ(x) − φ(y) − ⟨∇φ(y), x − y⟩."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return phi.value(x) - phi.value(y) - float(phi.gradient(y) @ (x - y))


def to_dual_coords(phi, x):
    return phi.gradient(np.asarray(x, dtype=float))


def from_dual_coords(phi, y, x0=None):
    return phi.conjugate_gradient(np.asarray(y, dtype=float), x0)


def tangent_to_dual(phi, x, v):
    """Map a primal tangent vector v at x to dual tangent coordinates H(x)v."""
    return phi.hessian(np.asarray(x, dtype=float)) @ np.asarray(v, dtype=float)


@dataclass(frozen=True)
class GeodesicPath:
    """Samples of a curve on a uniform grid t ∈ [0, 1].

    Attributes
    ----------
    t : ndarray, shape (m,)
    points : ndarray, shape (m, n)
    """

    t: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        for a in (self.t, self.points):
            a.setflags(write=False)

    @property
    def start(self):
        return self.points[0]

    @property
    def end(self):
        return self.points[-1]

    @property
    def m(self):
        return len(self.t)

    @property
    def samples(self):
        return list(zip(self.t.tolist(), self.points))

    def mapped(self, fn):
        """Same grid, each point replaced by ``fn(point)``."""
        return GeodesicPath(np.array(self.t), np.array([fn(p) for p in self.points]))

    def to_csv(self, header_lines=()):
        buf = io.StringIO()
        for line in header_lines:
            buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        n = self.points.shape[1]
        w.writerow(["t"] + [f"x_{i + 1}" for i in range(n)])
        for t, p in zip(self.t, self.points):
            w.writerow([repr(float(t))] + [repr(float(c)) for c in p])
        return buf.getvalue()


def _grid(m):
    if m < 2:
        raise ValueError("a path needs at least 2 samples")
    return np.linspace(0.0, 1.0, m)


def dual_geodesic(phi, x, y, m=101):
    """Dual-flat geodesic γ(t) = ∇φ*(t∇φ(y) + (1 − t)∇φ(x)).

    Each interior sample warm-starts the inverse map from the previous one.
    The endpoints are returned exactly.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = _grid(m)
    gx, gy = phi.gradient(x), phi.gradient(y)
    pts = np.empty((m, x.size))
    pts[0] = x
    prev = x
    for i in range(1, m - 1):
        prev = phi.conjugate_gradient(t[i] * gy + (1 - t[i]) * gx, prev)
        pts[i] = prev
    pts[-1] = y
    return GeodesicPath(t, pts)


def euclidean_segment(x, y, m=101):
    """Straight segment (1 − t)x + ty on the same grid as :func:`dual_geodesic`."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = _grid(m)
    return GeodesicPath(t, (1 - t)[:, None] * x + t[:, None] * y)


def dual_exp(phi, x, v):
    """Endpoint at t=1 of the dual geodesic leaving x with velocity v."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    phi.check_domain(x)
    return phi.conjugate_gradient(phi.gradient(x) + phi.hessian(x) @ v, x + v)


def dual_connection_coeffs(phi, x, step=CONNECTION_FD_STEP):
    """Connection coefficients Γ[k, i, j] = [H(x)⁻¹ ∂_i H(x)]_{kj}.

    ∂_i H is taken by central differences with the given step.
    """
    x = np.asarray(x, dtype=float)
    phi.check_domain(x)
    n = x.size
    H = phi.hessian(x)
    dH = np.empty((n, n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        dH[i] = (phi.hessian(x + e) - phi.hessian(x - e)) / (2 * step)
    try:
        lu = scipy.linalg.lu_factor(H, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise DomainError("metric is singular") from exc
    if np.min(np.abs(np.diag(lu[0]))) == 0:
        raise DomainError("metric is singular")
    gamma = np.empty((n, n, n))
    for i in range(n):
        gamma[:, i, :] = scipy.linalg.lu_solve(lu, dH[i])
    return gamma


def geodesic_ode_residual(phi, path):
    """Max over interior samples of ‖ẍ + Γ(ẋ, ẋ)‖ with grid differences."""
    if path.m < 5:
        raise ValueError("need at least 5 samples")
    dt = np.diff(path.t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0):
        raise ValueError("path grid is not uniform")
    h = dt[0]
    p = path.points
    worst = 0.0
    for i in range(1, path.m - 1):
        v = (p[i + 1] - p[i - 1]) / (2 * h)
        a = (p[i + 1] - 2 * p[i] + p[i - 1]) / h**2
        if not np.any(v) and not np.any(a):
            continue
        gamma = dual_connection_coeffs(phi, p[i])
        r = a + np.einsum("kij,i,j->k", gamma, v, v)
        worst = max(worst, float(np.linalg.norm(r)))
    return worst


def bregman_prox(f, phi, rho, x_prev, x0=None, tol=PROX_TOL):
    """argmin_x f(x) + ρ B_φ(x, x_prev).

    Solves ∇φ(x) − ∇φ(x_prev) + ∇f(x)/ρ = 0 by damped Newton started at
    ``x0`` (default ``x_prev``).
    """
    if not rho > 0:
        raise ValueError("rho must be positive")
    x_prev = np.asarray(x_prev, dtype=float)
    target = phi.gradient(x_prev)

    def residual(x):
        return phi.gradient(x) - target + f.gradient(x) / rho

    def jacobian(x):
        return phi.hessian(x) + f.hessian(x) / rho

    start = x_prev if x0 is None else np.asarray(x0, dtype=float)
    scale = max(1.0, float(np.linalg.norm(target)))
    return damped_newton(residual, jacobian, start, tol=tol, scale=scale)

