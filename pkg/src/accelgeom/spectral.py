"""Linear ODE matrices for quadratics and their 2×2 block structure.

For f(x) = ½(x − x*)ᵀH(x − x*) each continuous-time model is a linear
system u̇ = A(u − u*) whose blocks are polynomials in H. Conjugating by
diag(U, U), with H = UΛUᵀ, and interleaving the two halves splits A into
one 2×2 block per eigenvalue of H.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConstructionError
from .methods import Form, default_params, heavy_ball_constants
from .objectives import Quadratic

__all__ = [
    "LinearSystem", "BlockPair", "Certificate",
    "build_prox_ode_matrix", "build_agm_ode_matrix", "build_heavy_ball_matrix",
    "build_system", "interleave_permutation", "block_diagonalize", "block_matrix",
    "block_eigenvalues", "discriminant", "spectral_abscissa", "decay_envelope",
    "guaranteed_rate", "verify_decay_bound",
]

KINDS = ("prox_point", "agm", "heavy_ball")
CERT_SLACK = 1e-9


@dataclass(frozen=True)
class LinearSystem:
    """u̇ = A(u − u*).

    ``H`` and ``params`` record how A was built; they are None for a
    system given directly as a matrix.
    """

    A: np.ndarray
    u_star: np.ndarray
    kind: str = "generic"
    params: dict = field(default_factory=dict)
    H: np.ndarray | None = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or not np.all(np.isfinite(A)):
            raise ConstructionError("A must be a finite square matrix")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "u_star", np.asarray(self.u_star, dtype=float))

    def apply(self, u):
        return self.A @ (np.asarray(u, dtype=float) - self.u_star)


@dataclass(frozen=True)
class BlockPair:
    lambda_i: float
    T: np.ndarray
    nu_plus: complex
    nu_minus: complex

    @property
    def discriminant(self):
        return discriminant(self.T)


def _check_H(H):
    q = Quadratic(H)
    return q.H, q


def _u_star(n, x_star):
    x_star = np.zeros(n) if x_star is None else np.asarray(x_star, dtype=float)
    return np.concatenate([x_star, np.zeros(n)])


def _check_positive(**kw):
    for k, v in kw.items():
        if not (math.isfinite(v) and v > 0):
            raise ConstructionError(f"{k} must be positive, got {v!r}")


def build_prox_ode_matrix(H, eta, tau=None, alpha=1.0, x_star=None):
    """Matrix of the proximal point ODE in u = [z; g].

    With the proximal point constants τ = 1/η, α = 1 (the defaults) this is
    [[−I, −I/η + H⁻¹], [ηI, −ηH⁻¹]].
    """
    H, _ = _check_H(H)
    tau = 1.0 / eta if tau is None else tau
    _check_positive(eta=eta, tau=tau)
    n = H.shape[0]
    I = np.eye(n)
    Hinv = np.linalg.solve(H, I)
    c = alpha / (eta * tau)
    A = np.block([[-c * I, -I / eta + c * Hinv], [I / tau, -Hinv / tau]])
    return LinearSystem(A, _u_star(n, x_star), "prox_point",
                        {"eta": eta, "tau": tau, "alpha": alpha}, H)


def build_agm_ode_matrix(H, eta, tau, alpha, x_star=None):
    """[[−(α/(ητ))H, −I/η + (α/(ητ))I], [H/τ, −I/τ]]."""
    H, _ = _check_H(H)
    _check_positive(eta=eta, tau=tau)
    if not 0 <= alpha <= 1:
        raise ConstructionError(f"alpha must lie in [0, 1], got {alpha!r}")
    n = H.shape[0]
    I = np.eye(n)
    c = alpha / (eta * tau)
    A = np.block([[-c * H, -I / eta + c * I], [H / tau, -I / tau]])
    return LinearSystem(A, _u_star(n, x_star), "agm",
                        {"eta": eta, "tau": tau, "alpha": alpha}, H)


def build_heavy_ball_matrix(H, beta, gamma, x_star=None):
    """[[0, I], [−γH, −(1 − β)I]] in u = [x; p]."""
    H, _ = _check_H(H)
    n = H.shape[0]
    I = np.eye(n)
    A = np.block([[np.zeros((n, n)), I], [-gamma * H, -(1 - beta) * I]])
    return LinearSystem(A, _u_star(n, x_star), "heavy_ball",
                        {"beta": beta, "gamma": gamma}, H)


def build_system(kind, H, params, x_star=None):
    """Dispatch on ``kind`` using the relevant fields of a HyperParams."""
    if kind == "prox_point":
        return build_prox_ode_matrix(H, params.eta, params.tau, params.alpha, x_star)
    if kind == "agm":
        return build_agm_ode_matrix(H, params.eta, params.tau, params.alpha, x_star)
    if kind == "heavy_ball":
        return build_heavy_ball_matrix(H, params.beta, params.gamma, x_star)
    raise ConstructionError(f"unknown system kind {kind!r}")


def interleave_permutation(n):
    """Π with Π[2i, i] = 1 and Π[2i+1, n+i] = 1, so (Πw)_{2i} = w_i, (Πw)_{2i+1} = w_{n+i}."""
    P = np.zeros((2 * n, 2 * n))
    idx = np.arange(n)
    P[2 * idx, idx] = 1.0
    P[2 * idx + 1, n + idx] = 1.0
    return P


def block_diagonalize(sys, return_matrix=False):
    """Split an H-structured system into one 2×2 block per eigenvalue of H.

    Computes Π · diag(Uᵀ, Uᵀ) A diag(U, U) · Πᵀ and reads off its diagonal
    blocks. With ``return_matrix`` the full conjugated matrix is returned
    as well, for checking that off-block entries vanish.
    """
    if sys.H is None:
        raise ConstructionError("block structure needs the system's H")
    lam, U = np.linalg.eigh(sys.H)
    n = lam.size
    W = scipy.linalg.block_diag(U, U)
    P = interleave_permutation(n)
    B = P @ (W.T @ sys.A @ W) @ P.T
    blocks = []
    for i in range(n):
        T = B[2 * i:2 * i + 2, 2 * i:2 * i + 2].copy()
        blocks.append(BlockPair(float(lam[i]), T, *block_eigenvalues(T)))
    return (blocks, B) if return_matrix else blocks


def block_matrix(kind, lam, params):
    """Closed-form 2×2 block for eigenvalue ``lam`` (params as a mapping)."""
    p = params
    if kind == "prox_point":
        eta, tau, alpha = p["eta"], p["tau"], p["alpha"]
        c = alpha / (eta * tau)
        return np.array([[-c, -1 / eta + c / lam], [1 / tau, -1 / (tau * lam)]])
    if kind == "agm":
        eta, tau, alpha = p["eta"], p["tau"], p["alpha"]
        c = alpha / (eta * tau)
        return np.array([[-c * lam, -1 / eta + c], [lam / tau, -1 / tau]])
    if kind == "heavy_ball":
        return np.array([[0.0, 1.0], [-p["gamma"] * lam, -(1 - p["beta"])]])
    raise ConstructionError(f"unknown system kind {kind!r}")


def discriminant(T):
    """(a + d)² − 4(ad − bc)."""
    T = np.asarray(T, dtype=float)
    tr = T[0, 0] + T[1, 1]
    det = T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0]
    return float(tr * tr - 4 * det)


def block_eigenvalues(T):
    """Roots ν± = (tr ± √(tr² − 4 det))/2 of a real 2×2 matrix."""
    T = np.asarray(T, dtype=float)
    tr = T[0, 0] + T[1, 1]
    sq = cmath.sqrt(discriminant(T))
    return complex((tr + sq) / 2), complex((tr - sq) / 2)


def spectral_abscissa(sys, method="auto"):
    """Largest real part of the eigenvalues of A.

    ``method="auto"`` uses the closed-form block eigenvalues when the system
    carries H, otherwise a dense nonsymmetric eigensolver.
    """
    if method not in ("auto", "blocks", "dense"):
        raise ValueError(f"unknown method {method!r}")
    if method == "dense" or (method == "auto" and sys.H is None):
        return float(np.max(np.linalg.eigvals(sys.A).real))
    return max(b.nu_plus.real for b in block_diagonalize(sys))


def decay_envelope(sys, t):
    """max_j exp(t·Re λ_j)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return math.exp(t * spectral_abscissa(sys))


def guaranteed_rate(kind, mu, L):
    """Guaranteed decay rate for each model at its standard constants."""
    sm, sl = math.sqrt(mu), math.sqrt(L)
    if kind == "prox_point":
        return sm / (sm + sl)
    if kind == "agm":
        return 0.5 * math.sqrt(mu / L)
    if kind == "heavy_ball":
        return sm / (sl + sm)
    raise ConstructionError(f"unknown system kind {kind!r}")


DEFAULT_FORM = {"prox_point": Form.PROX_POINT, "agm": Form.BREGMAN_AGM,
                 "heavy_ball": Form.HEAVY_BALL}


@dataclass(frozen=True)
class Certificate:
    kind: str
    mu: float
    L: float
    rho_bound: float
    abscissa: float
    passed: bool
    worst_block_lambda: float
    worst_block: list
    params: dict
    H: list

    def to_dict(self):
        return {
            "kind": self.kind, "mu": self.mu, "L": self.L,
            "rho_bound": self.rho_bound, "abscissa": self.abscissa,
            "pass": self.passed, "worst_block_lambda": self.worst_block_lambda,
            "worst_block": self.worst_block, "params": self.params, "H": self.H,
        }


def verify_decay_bound(kind, H, params=None):
    """Certify that the spectral abscissa is at most −ρ (+1e−9).

    ``params`` defaults to the standard constants for ``kind`` at the μ, L
    of H; μ and L are always taken from H.
    """
    if kind not in KINDS:
        raise ConstructionError(f"unknown system kind {kind!r}")
    H, q = _check_H(H)
    mu, L = q.mu, q.lipschitz
    if params is None:
        params = default_params(DEFAULT_FORM[kind], mu, L)
        if kind == "heavy_ball":
            beta, gamma = heavy_ball_constants(mu, L)
            params = params.with_(beta=beta, gamma=gamma)
    sys = build_system(kind, H, params)
    blocks = block_diagonalize(sys)
    worst = max(blocks, key=lambda b: b.nu_plus.real)
    a = worst.nu_plus.real
    rho = guaranteed_rate(kind, mu, L)
    return Certificate(
        kind=kind, mu=mu, L=L, rho_bound=rho, abscissa=a,
        passed=bool(a <= -rho + CERT_SLACK),
        worst_block_lambda=worst.lambda_i, worst_block=worst.T.tolist(),
        params=dict(sys.params), H=H.tolist(),
    )
