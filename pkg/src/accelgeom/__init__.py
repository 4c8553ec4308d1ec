"""Accelerated gradient methods as proximal steps in a curved geometry.

Modules
-------
objectives   quadratic and quartic test functions with ∇f, ∇²f and ∇f*
bregman      divergences, dual coordinates, dual-flat geodesics, Bregman prox
methods      discrete proximal, momentum and accelerated forms with state maps
continuous   proximal, accelerated and heavy-ball ODEs, RK4, block-implicit Euler
spectral     ODE matrices, 2×2 block reduction and decay-rate certificates
cli          command-line front end
"""

from .errors import (AccelGeomError, ConstructionError, DivergenceError, DomainError,
                     SolverError, UnsupportedOperation)
from .methods import Form, HyperParams, default_params, map_state, run
from .objectives import Quadratic, Quartic, make_quadratic, make_quartic

__version__ = "0.1.0"

__all__ = [
    "AccelGeomError", "ConstructionError", "DivergenceError", "DomainError",
    "SolverError", "UnsupportedOperation", "Form", "HyperParams", "default_params",
    "map_state", "run", "Quadratic", "Quartic", "make_quadratic", "make_quartic",
]
