"""Experiment configuration loaded from JSON.

Keys (all optional unless noted by the subcommand that reads them)::

    objective   {"kind": "quadratic", "H": [[...]], "x_star": [...]}
                {"kind": "quartic", "A": [[...]]} | {"kind": "euclidean", "n": 2}
    method      discrete form name, e.g. "bregman_agm"
    ode         "prox_point" | "agm" | "heavy_ball"
    bundle      "quadratic_paths" (discrete and ODE paths of the demo quadratic together)
    params      HyperParams overrides, e.g. {"eta": 2.0}
    x0          starting point
    k_max       iteration count (discrete)
    dt, t_max   step and horizon (continuous)
    seed        RNG seed for random suites
    tol         equivalence tolerance
    perturb     {"form": "nesterov_form_ii", "beta_offset": 0.001}
    kinds       systems to certify
    grid        {"mu": [...], "kappa": [...], "per_cell": 20, "n_min": 2, "n_max": 8}
    generator   objective spec used as the geometry generator
    pairs       [[x, y], ...] geodesic endpoint pairs
    m           samples per geodesic
"""

import json
import math
from dataclasses import asdict, dataclass, field

from .errors import ConstructionError
from .methods import Form, HyperParams

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "DEMO_QUADRATIC_H", "DEMO_QUARTIC_A"]

DEMO_QUADRATIC_H = [[2.0, 1.0], [1.0, 3.0]]
DEMO_QUARTIC_A = [[2.0, 1.0], [1.0, 3.0]]
ODE_KINDS = ("prox_point", "agm", "heavy_ball")
PARAM_NAMES = {f for f in HyperParams.__dataclass_fields__}


class ConfigError(ConstructionError):
    """The configuration is malformed or inconsistent."""


def _default_grid():
    return {"mu": [0.1, 1.0], "kappa": [1.0, 10.0, 100.0, 1e4], "per_cell": 20,
            "n_min": 2, "n_max": 8}


@dataclass
class ExperimentConfig:
    objective: dict | None = None
    method: str | None = None
    ode: str | None = None
    bundle: str | None = None
    params: dict = field(default_factory=dict)
    x0: list | None = None
    k_max: int = 100
    dt: float | None = None
    t_max: float = 20.0
    seed: int = 0
    tol: float = 1e-9
    perturb: dict | None = None
    kinds: list = field(default_factory=lambda: list(ODE_KINDS))
    grid: dict | None = None
    generator: dict | None = None
    pairs: list | None = None
    m: int = 101

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    def validate(self):
        if self.method is not None:
            try:
                Form(self.method)
            except ValueError:
                raise ConfigError(f"unknown method {self.method!r}") from None
        if self.ode is not None and self.ode not in ODE_KINDS:
            raise ConfigError(f"unknown ode kind {self.ode!r}")
        if self.bundle not in (None, "quadratic_paths"):
            raise ConfigError(f"unknown bundle {self.bundle!r}")
        bad = set(self.params) - PARAM_NAMES
        if bad:
            raise ConfigError(f"unknown params: {sorted(bad)}")
        for k, v in self.params.items():
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"param {k} must be a finite number")
        if not isinstance(self.k_max, int) or self.k_max < 1:
            raise ConfigError("k_max must be a positive integer")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError("dt must be positive")
        if not self.t_max > 0:
            raise ConfigError("t_max must be positive")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")
        if not isinstance(self.m, int) or self.m < 2:
            raise ConfigError("m must be an integer >= 2")
        for k in self.kinds:
            if k not in ODE_KINDS:
                raise ConfigError(f"unknown certificate kind {k!r}")
        if self.perturb is not None:
            if set(self.perturb) - {"form", "beta_offset"} or "form" not in self.perturb:
                raise ConfigError("perturb needs 'form' and optional 'beta_offset'")
            try:
                Form(self.perturb["form"])
            except ValueError:
                raise ConfigError(f"unknown form {self.perturb['form']!r}") from None

    def require_run_target(self):
        """Exactly one of method, ode or bundle must be set for ``run``."""
        set_ = [k for k in ("method", "ode", "bundle") if getattr(self, k) is not None]
        if len(set_) != 1:
            raise ConfigError("run needs exactly one of 'method', 'ode' or 'bundle'")

    def grid_spec(self):
        g = _default_grid()
        if self.grid is not None:
            extra = set(self.grid) - set(g)
            if extra:
                raise ConfigError(f"unknown grid keys: {sorted(extra)}")
            g.update(self.grid)
        return g

    def objective_spec(self):
        """The configured objective, or the 2×2 demo quadratic."""
        if self.objective is None:
            return {"kind": "quadratic", "H": DEMO_QUADRATIC_H}
        return self.objective

    def to_dict(self, resolve_objective=True):
        """Plain-dict form; the default objective is written out explicitly."""
        d = asdict(self)
        if resolve_objective:
            d["objective"] = self.objective_spec()
        return d


def load_config(path=None, seed=None):
    """Read a config file (or take defaults) and apply a seed override."""
    data = {}
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    cfg = ExperimentConfig.from_dict(data)
    if seed is not None:
        cfg.seed = seed
    return cfg
