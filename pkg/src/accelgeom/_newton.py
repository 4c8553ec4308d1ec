"""Damped Newton iteration for smooth square nonlinear systems."""

import numpy as np
import scipy.linalg

from .errors import SolverError

_EPS = np.finfo(float).eps


def damped_newton(residual, jacobian, x0, *, tol=1e-12, max_iter=100,
                  max_halvings=60, scale=1.0):
    """Solve ``residual(x) = 0`` by Newton's method with step halving.

    A step is accepted once it strictly reduces the residual norm. The
    absolute tolerance is raised to the rounding floor ``16 eps * scale`` when
    that is larger, since a residual formed as a difference of two vectors of
    magnitude ``scale`` cannot be resolved below it.

    Raises
    ------
    SolverError
        If the tolerance is not met within ``max_iter`` iterations or no
        step length reduces the residual.
    """
    x = np.array(x0, dtype=float)
    r = residual(x)
    nr = np.linalg.norm(r)
    tol_eff = max(tol, 16 * _EPS * scale)
    for it in range(max_iter):
        if nr <= tol_eff:
            return x
        try:
            d = scipy.linalg.solve(jacobian(x), -r, assume_a="sym")
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SolverError(f"singular Newton system: {exc}", nr, it) from exc
        step = 1.0
        for _ in range(max_halvings + 1):
            x_new = x + step * d
            r_new = residual(x_new)
            nr_new = np.linalg.norm(r_new)
            if np.isfinite(nr_new) and nr_new < nr:
                break
            step *= 0.5
        else:
            raise SolverError("line search failed to reduce residual", nr, it)
        x, r, nr = x_new, r_new, nr_new
    if nr <= tol_eff:
        return x
    raise SolverError("Newton iteration did not converge", nr, max_iter)
