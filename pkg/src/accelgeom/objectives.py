"""Objective functions with gradient, Hessian and conjugate-gradient maps.

Every objective exposes the four evaluators used by the methods and the
geometry code:

* ``value(x)``            f(x)
* ``gradient(x)``         ∇f(x)
* ``hessian(x)``          ∇²f(x)
* ``conjugate_gradient(g)``  ∇f*(g), the inverse of the gradient map

together with the curvature constants ``mu`` (strong convexity) and
``lipschitz`` (smoothness). Objectives are immutable once built.
"""

import math
from abc import ABC, abstractmethod

import numpy as np
import scipy.linalg

from ._newton import damped_newton
from .errors import ConstructionError, DomainError, UnsupportedOperation

__all__ = [
    "Objective", "Quadratic", "Quartic", "Conjugate", "Tilted",
    "make_quadratic", "make_quartic", "euclidean", "strong_convexity_bounds",
    "objective_from_config", "objective_to_config", "random_spd",
]

# Quartic dual-map queries closer than this to the origin (in ‖Ax‖) are
# rejected: the Hessian vanishes there.
QUARTIC_ORIGIN_RADIUS = 1e-6

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 100


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class Objective(ABC):
    """Smooth convex function on R^n.

    Attributes
    ----------
    n : int
        Dimension.
    mu : float
        Strong convexity constant (0 when not globally strongly convex).
    lipschitz : float
        Gradient Lipschitz constant, ``math.inf`` when unbounded.
    x_star : ndarray or None
        Known minimizer.
    """

    n: int
    mu: float
    lipschitz: float
    x_star: np.ndarray | None = None
    demo_only = False

    @property
    def L(self):
        return self.lipschitz

    @abstractmethod
    def value(self, x): ...

    @abstractmethod
    def gradient(self, x): ...

    @abstractmethod
    def hessian(self, x): ...

    def conjugate_gradient(self, g, x0=None):
        """Return x with ∇f(x) = g by damped Newton on ∇f(x) − g.

        ``x0`` is an optional warm start supplied by the caller.
        """
        g = np.asarray(g, dtype=float)
        start = g.copy() if x0 is None else np.asarray(x0, dtype=float)
        return damped_newton(
            lambda x: self.gradient(x) - g, self.hessian, start,
            tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER,
            scale=max(1.0, float(np.linalg.norm(g))),
        )

    def check_domain(self, x):
        """Raise ``DomainError`` where the metric ∇²f(x) is singular."""

    @property
    def f_star(self):
        if self.x_star is None:
            raise UnsupportedOperation("minimizer unknown")
        return float(self.value(self.x_star))


class Quadratic(Objective):
    """f(x) = ½ (x − x*)ᵀ H (x − x*) with H symmetric positive definite."""

    def __init__(self, H, x_star=None):
        H = np.array(H, dtype=float)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise ConstructionError(f"H must be square, got shape {H.shape}")
        n = H.shape[0]
        scale = max(1.0, float(np.max(np.abs(H))))
        if not np.allclose(H, H.T, rtol=0.0, atol=1e-12 * scale):
            raise ConstructionError("H is not symmetric")
        H = 0.5 * (H + H.T)
        try:
            self._cho = scipy.linalg.cho_factor(H)
        except np.linalg.LinAlgError as exc:
            raise ConstructionError("H is not positive definite") from exc
        eig = np.linalg.eigvalsh(H)
        if eig[0] <= 0:
            raise ConstructionError("H is not positive definite")
        x_star = np.zeros(n) if x_star is None else np.array(x_star, dtype=float)
        if x_star.shape != (n,):
            raise ConstructionError(f"x_star must have shape ({n},)")
        self.n = n
        self.H = _frozen(H)
        self.x_star = _frozen(x_star)
        self.mu = float(eig[0])
        self.lipschitz = float(eig[-1])

    def value(self, x):
        e = np.asarray(x, dtype=float) - self.x_star
        return 0.5 * float(e @ self.H @ e)

    def gradient(self, x):
        return self.H @ (np.asarray(x, dtype=float) - self.x_star)

    def hessian(self, x):
        return np.array(self.H)

    def conjugate_gradient(self, g, x0=None):
        return self.x_star + scipy.linalg.cho_solve(self._cho, np.asarray(g, dtype=float))

    def solve_shifted(self, shift, rhs):
        """Solve (H + shift·I) x = rhs."""
        return scipy.linalg.solve(self.H + shift * np.eye(self.n), rhs, assume_a="pos")

    def __repr__(self):
        return f"Quadratic(n={self.n}, mu={self.mu:.6g}, L={self.lipschitz:.6g})"


class Quartic(Objective):
    """f(x) = ¼‖Ax‖⁴, used only to draw geodesics.

    Not strongly convex (its Hessian vanishes at the origin), so ``mu`` is 0,
    ``lipschitz`` is infinite and the objective is flagged ``demo_only``.
    """

    demo_only = True

    def __init__(self, A):
        A = np.array(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ConstructionError(f"A must be square, got shape {A.shape}")
        if np.linalg.matrix_rank(A) < A.shape[0]:
            raise ConstructionError("A is singular")
        self.n = A.shape[0]
        self.A = _frozen(A)
        self.AtA = _frozen(A.T @ A)
        self._ata_norm = float(np.linalg.norm(self.AtA, 2))
        self.mu = 0.0
        self.lipschitz = math.inf
        self.x_star = _frozen(np.zeros(self.n))

    def value(self, x):
        r2 = float(np.sum((self.A @ np.asarray(x, dtype=float)) ** 2))
        return 0.25 * r2 * r2

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        r2 = float(np.sum((self.A @ x) ** 2))
        return r2 * (self.AtA @ x)

    def hessian(self, x):
        x = np.asarray(x, dtype=float)
        r2 = float(np.sum((self.A @ x) ** 2))
        w = self.AtA @ x
        return r2 * self.AtA + 2.0 * np.outer(w, w)

    def check_domain(self, x):
        if np.linalg.norm(self.A @ np.asarray(x, dtype=float)) < QUARTIC_ORIGIN_RADIUS:
            raise DomainError("point too close to the origin, where the quartic's Hessian is singular")

    def conjugate_gradient(self, g, x0=None):
        g = np.asarray(g, dtype=float)
        # ‖Ax‖³ = ‖A⁻ᵀg‖ at the solution; reject before iterating.
        radius = np.linalg.norm(np.linalg.solve(self.A.T, g)) ** (1.0 / 3.0)
        if radius < QUARTIC_ORIGIN_RADIUS:
            raise DomainError("dual point maps too close to the origin of the quartic")
        if x0 is None:
            gn = np.linalg.norm(g)
            # exact when A is a multiple of an orthogonal matrix
            x0 = g * (gn / self._ata_norm**2) ** (1.0 / 3.0) / gn
        return super().conjugate_gradient(g, x0)

    def __repr__(self):
        return f"Quartic(n={self.n})"


class Conjugate(Objective):
    """The convex conjugate f* of an objective, built from its dual maps."""

    def __init__(self, base):
        self.base = base
        self.n = base.n
        self.mu = 0.0 if base.lipschitz == math.inf else 1.0 / base.lipschitz
        self.lipschitz = math.inf if base.mu == 0 else 1.0 / base.mu
        self.x_star = None if base.x_star is None else base.gradient(np.zeros(base.n))

    def value(self, g):
        g = np.asarray(g, dtype=float)
        x = self.base.conjugate_gradient(g)
        return float(g @ x) - self.base.value(x)

    def gradient(self, g, x0=None):
        return self.base.conjugate_gradient(g, x0)

    def hessian(self, g):
        x = self.base.conjugate_gradient(g)
        return np.linalg.inv(self.base.hessian(x))

    def conjugate_gradient(self, y, x0=None):
        return self.base.gradient(y)

    def check_domain(self, g):
        self.base.check_domain(self.base.conjugate_gradient(g))


class Tilted(Objective):
    """x ↦ f(x) − ⟨w, x⟩."""

    def __init__(self, base, w):
        self.base = base
        self.w = _frozen(w)
        self.n = base.n
        self.mu = base.mu
        self.lipschitz = base.lipschitz
        self.x_star = None

    def value(self, x):
        return self.base.value(x) - float(self.w @ np.asarray(x, dtype=float))

    def gradient(self, x):
        return self.base.gradient(x) - self.w

    def hessian(self, x):
        return self.base.hessian(x)

    def conjugate_gradient(self, g, x0=None):
        return self.base.conjugate_gradient(np.asarray(g, dtype=float) + self.w, x0)

    def check_domain(self, x):
        self.base.check_domain(x)


def make_quadratic(H, x_star=None):
    return Quadratic(H, x_star)


def make_quartic(A):
    return Quartic(A)


def euclidean(n):
    """The generator ½‖x‖², whose Bregman divergence is ½‖x − y‖²."""
    return Quadratic(np.eye(n))


def strong_convexity_bounds(obj):
    """Return ``(mu, L)`` as the extreme eigenvalues of a quadratic's Hessian."""
    if not isinstance(obj, Quadratic):
        raise UnsupportedOperation(f"curvature bounds need a quadratic objective, got {type(obj).__name__}")
    eig = np.linalg.eigvalsh(obj.H)
    return float(eig[0]), float(eig[-1])


def objective_from_config(spec):
    """Build an objective from its JSON description.

    ``{"kind": "quadratic", "H": [[...]], "x_star": [...]}``,
    ``{"kind": "quartic", "A": [[...]]}`` or ``{"kind": "euclidean", "n": 2}``.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConstructionError("objective spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "quadratic":
        if "H" not in spec:
            raise ConstructionError("quadratic objective needs 'H'")
        return Quadratic(spec["H"], spec.get("x_star"))
    if kind == "quartic":
        if "A" not in spec:
            raise ConstructionError("quartic objective needs 'A'")
        return Quartic(spec["A"])
    if kind == "euclidean":
        return euclidean(int(spec["n"]))
    raise ConstructionError(f"unknown objective kind {kind!r}")


def objective_to_config(obj):
    if isinstance(obj, Quadratic):
        return {"kind": "quadratic", "H": obj.H.tolist(), "x_star": obj.x_star.tolist()}
    if isinstance(obj, Quartic):
        return {"kind": "quartic", "A": obj.A.tolist()}
    raise UnsupportedOperation(f"cannot serialize {type(obj).__name__}")


def random_spd(rng, n, mu, L):
    """Random symmetric matrix with spectrum in [mu, L] attaining both ends.

    The eigenbasis is Haar-distributed (QR of a Gaussian matrix with sign
    correction); interior eigenvalues are uniform on [mu, L].
    """
    if n < 1 or not 0 < mu <= L:
        raise ValueError("need n >= 1 and 0 < mu <= L")
    Z = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    Q = Q * np.sign(np.diag(R))
    lam = rng.uniform(mu, L, size=n)
    lam[0] = mu
    if n > 1:
        lam[1] = L
    H = (Q * lam) @ Q.T
    return 0.5 * (H + H.T)
