"""Command-line front end.

Subcommands: ``run``, ``equivalence``, ``certify``, ``geodesic``.
Global flags: ``--config PATH``, ``--out PATH``, ``--format {csv,json}``,
``--seed N``.

Exit codes: 0 success, 1 configuration error, 2 solver failure or
divergence, 3 equivalence failure, 4 failed certificate.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bregman, continuous, io, methods, spectral
from .config import DEMO_QUARTIC_A, ConfigError, load_config
from .errors import (ConstructionError, DivergenceError, DomainError, SolverError,
                     UnsupportedOperation)
from .methods import Form
from .objectives import Quadratic, objective_from_config, random_spd

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_EQUIVALENCE, EXIT_CERTIFY = 0, 1, 2, 3, 4

ODE_FORM = {"prox_point": Form.PROX_POINT, "agm": Form.BREGMAN_AGM, "heavy_ball": Form.HEAVY_BALL}
DEFAULT_PAIRS = [[[1.0, 0.0], [0.0, 1.0]], [[1.0, 1.0], [0.0, 1.0]]]


class StageError(Exception):
    def __init__(self, stage, exc):
        super().__init__(f"{stage}: {exc}")
        self.stage = stage
        self.exc = exc


class _Stage:
    """Context manager that tags exceptions with the stage that raised them."""

    def __init__(self, name):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, et, exc, tb):
        if exc is not None and not isinstance(exc, StageError):
            raise StageError(self.name, exc) from exc
        return False


def _log(msg):
    print(msg, file=sys.stderr)


def _objective(cfg):
    return objective_from_config(cfg.objective_spec())


def _x0(cfg, n):
    x0 = np.ones(n) if cfg.x0 is None else np.asarray(cfg.x0, dtype=float)
    if x0.shape != (n,):
        raise ConfigError(f"x0 must have length {n}")
    return x0


def _params(cfg, form, obj):
    over = dict(cfg.params)
    mu = over.get("mu", obj.mu)
    L = over.get("L", obj.lipschitz)
    if not (0 < mu <= L < float("inf")):
        raise ConfigError("objective has no finite curvature bounds; set params.mu and params.L")
    return methods.default_params(form, mu, L).with_(**over)


def _single_out(args):
    """Output path for a one-file result; None means stdout."""
    return None if args.out is None else Path(args.out)


def _out_dir(args):
    if args.out is None:
        raise ConfigError("this command writes several files; pass --out DIRECTORY")
    d = Path(args.out)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _emit_table(path, fmt, columns, rows, config, extra=None):
    rows = list(rows)
    if path is None:
        if fmt == "json":
            sys.stdout.write(io.dumps({"config": config, "columns": columns, "rows": rows, **(extra or {})}))
        else:
            sys.stdout.write("# config: " + json.dumps(config) + "\n")
            sys.stdout.write(",".join(columns) + "\n")
            for r in rows:
                sys.stdout.write(",".join(io.format_value(v) for v in r) + "\n")
        return
    if fmt == "json":
        io.write_json(path, {"columns": columns, "rows": rows, **(extra or {})}, config)
    else:
        io.write_csv(path, columns, rows, config)


def _discrete(cfg, obj, form, x0):
    params = _params(cfg, form, obj)
    return methods.run(form, obj, params, x0, cfg.k_max)


def _ode(cfg, obj, kind, x0):
    params = _params(cfg, ODE_FORM[kind], obj)
    sys_ = continuous.OdeSystem(kind, obj, params)
    return sys_, continuous.integrate_rk4(sys_, continuous.initial_state(sys_, x0), cfg.dt, cfg.t_max)


def _ode_primal(sys_, u):
    n = sys_.n
    if sys_.kind is continuous.OdeKind.HEAVY_BALL:
        return u[:n]
    p = sys_.params
    return u[:n] + (p.alpha / p.eta) * u[n:]


def _f_gap(obj, x):
    return obj.value(x) - obj.f_star if obj.x_star is not None else float("nan")


def cmd_run(args, cfg):
    with _Stage("config"):
        cfg.require_run_target()
        obj = _objective(cfg)
        x0 = _x0(cfg, obj.n)
    conf = cfg.to_dict()
    fmt = args.format
    if cfg.method is not None:
        form = Form(cfg.method)
        with _Stage(f"run {form}"):
            traj = _discrete(cfg, obj, form, x0)
        _emit_table(_single_out(args), fmt, traj.columns(), traj.rows(), conf,
                    {"form": str(form), "params": traj.params.to_dict()})
        x = methods.primary_point(form, traj.final.state, traj.params)
        _log(f"{form}: iterations={cfg.k_max} final f-f*={_f_gap(obj, x)!r} grad_norm={traj.final.grad_norm!r}")
        return EXIT_OK
    if cfg.ode is not None:
        with _Stage(f"integrate {cfg.ode} ode"):
            sys_, traj = _ode(cfg, obj, cfg.ode, x0)
        _emit_table(_single_out(args), fmt, traj.columns(), traj.rows(), conf,
                    {"ode": cfg.ode, "params": sys_.params.to_dict(), "dt": traj.dt})
        x = _ode_primal(sys_, traj.u[-1])
        _log(f"{cfg.ode} ode: steps={len(traj) - 1} t={float(traj.t[-1])!r} final f-f*={_f_gap(obj, x)!r}")
        return EXIT_OK
    return _run_quadratic_paths(args, cfg, obj, x0)


def _run_quadratic_paths(args, cfg, obj, x0):
    """Discrete AGM, proximal point and both ODE paths on one objective."""
    out = _out_dir(args)
    conf = cfg.to_dict()
    ext = "json" if args.format == "json" else "csv"
    trajs = {}
    for form in (Form.BREGMAN_AGM, Form.PROX_POINT):
        with _Stage(f"run {form}"):
            trajs[form] = _discrete(cfg, obj, form, x0)
        t = trajs[form]
        _emit_table(out / f"discrete_{form}.{ext}", args.format, t.columns(), t.rows(), conf,
                    {"form": str(form), "params": t.params.to_dict()})
    for kind in ("agm", "prox_point"):
        with _Stage(f"integrate {kind} ode"):
            sys_, t = _ode(cfg, obj, kind, x0)
        _emit_table(out / f"ode_{kind}.{ext}", args.format, t.columns(), t.rows(), conf,
                    {"ode": kind, "params": sys_.params.to_dict(), "dt": t.dt})
    sep = methods.path_divergence(trajs[Form.BREGMAN_AGM].points(), trajs[Form.PROX_POINT].points())
    _log(f"wrote 4 files to {out}; AGM vs proximal point path divergence={sep!r}")
    return EXIT_OK


def cmd_equivalence(args, cfg):
    with _Stage("config"):
        obj = _objective(cfg)
        if not isinstance(obj, Quadratic):
            raise ConfigError("the equivalence suite needs a quadratic objective")
        x0 = _x0(cfg, obj.n)
        mu, L = cfg.params.get("mu", obj.mu), cfg.params.get("L", obj.lipschitz)
        overrides = {}
        if cfg.perturb is not None:
            f = Form(cfg.perturb["form"])
            if f not in methods.AGM_FORMS:
                raise ConfigError(f"{f} is not one of the accelerated forms")
            p = methods.equivalence_params(f, mu, L)
            overrides[f] = p.with_(beta=p.beta + float(cfg.perturb.get("beta_offset", 0.0)))
    with _Stage("equivalence"):
        rep = methods.run_equivalence(obj, x0, cfg.k_max, mu, L, overrides, cfg.tol)
    conf = cfg.to_dict()
    names = [str(f) for f in rep.forms]
    path = _single_out(args)
    if args.format == "json":
        if path is None:
            sys.stdout.write(io.dumps({"config": conf, **rep.to_dict()}))
        else:
            io.write_json(path, rep.to_dict(), conf)
    else:
        rows = [[i, *rep.deviation[i].tolist()] for i in range(len(names))]
        _emit_table(path, "csv", ["form_index", *names], rows, conf)
    if rep.passed:
        _log(f"equivalence: all {len(names)} forms agree over {cfg.k_max} steps; "
             f"max deviation={rep.max_deviation!r}")
        return EXIT_OK
    (a, b), k = min(rep.first_failure.items(), key=lambda kv: kv[1])
    culprit = rep.culprit()
    _log(f"equivalence FAILED: pair ({a}, {b}) first exceeds tol={cfg.tol!r} at k={k}; "
         f"max deviation={rep.max_deviation!r}"
         + (f"; form common to all failing pairs: {culprit}" if culprit else ""))
    return EXIT_EQUIVALENCE


def _certify_cases(cfg):
    if cfg.objective is not None and cfg.grid is None:
        obj = _objective(cfg)
        if not isinstance(obj, Quadratic):
            raise ConfigError("certification needs a quadratic objective")
        yield np.array(obj.H)
        return
    g = cfg.grid_spec()
    rng = np.random.default_rng(cfg.seed)
    for mu in g["mu"]:
        for kappa in g["kappa"]:
            for _ in range(int(g["per_cell"])):
                n = int(rng.integers(g["n_min"], g["n_max"] + 1))
                yield random_spd(rng, n, float(mu), float(mu) * float(kappa))


def cmd_certify(args, cfg):
    certs = []
    with _Stage("config"):
        cases = list(_certify_cases(cfg))
    for H in cases:
        q = Quadratic(H)
        for kind in cfg.kinds:
            with _Stage(f"certify {kind}"):
                params = None
                if cfg.params:
                    form = spectral.DEFAULT_FORM[kind]
                    params = methods.default_params(form, q.mu, q.lipschitz).with_(**cfg.params)
                certs.append(spectral.verify_decay_bound(kind, H, params))
    conf = cfg.to_dict(resolve_objective=False)
    ok = all(c.passed for c in certs)
    path = _single_out(args)
    if args.format == "json":
        payload = {"all_pass": ok, "certificates": [c.to_dict() for c in certs]}
        if path is None:
            sys.stdout.write(io.dumps({"config": conf, **payload}))
        else:
            io.write_json(path, payload, conf)
    else:
        cols = ["kind", "n", "mu", "L", "rho_bound", "abscissa", "pass", "worst_block_lambda"]
        rows = [[c.kind, len(c.H), c.mu, c.L, c.rho_bound, c.abscissa, c.passed,
                 c.worst_block_lambda] for c in certs]
        _emit_table(path, "csv", cols, rows, conf)
    failed = [c for c in certs if not c.passed]
    _log(f"certify: {len(certs) - len(failed)}/{len(certs)} certificates pass")
    if failed:
        w = max(failed, key=lambda c: c.abscissa + c.rho_bound)
        _log(f"certify FAILED: kind={w.kind} mu={w.mu!r} L={w.L!r} abscissa={w.abscissa!r} "
             f"bound=-{w.rho_bound!r}")
        return EXIT_CERTIFY
    return EXIT_OK


def cmd_geodesic(args, cfg):
    with _Stage("config"):
        spec = cfg.generator or {"kind": "quartic", "A": DEMO_QUARTIC_A}
        phi = objective_from_config(spec)
        pairs = cfg.pairs if cfg.pairs is not None else DEFAULT_PAIRS
        pairs = [(np.asarray(x, dtype=float), np.asarray(y, dtype=float)) for x, y in pairs]
        for x, y in pairs:
            if x.shape != (phi.n,) or y.shape != (phi.n,):
                raise ConfigError(f"geodesic endpoints must have length {phi.n}")
        out = _out_dir(args)
    conf = {**cfg.to_dict(resolve_objective=False), "generator": spec}
    n = phi.n
    cols = ["t"] + [f"x_{i + 1}" for i in range(n)] + [f"euclid_{i + 1}" for i in range(n)]
    for idx, (x, y) in enumerate(pairs):
        with _Stage(f"geodesic pair {idx}"):
            geo = bregman.dual_geodesic(phi, x, y, cfg.m)
            seg = bregman.euclidean_segment(x, y, cfg.m)
            views = {
                "primal": (geo.points, seg.points),
                "dual": (np.array([phi.gradient(p) for p in geo.points]),
                         np.array([phi.gradient(p) for p in seg.points])),
            }
        for view, (gp, sp) in views.items():
            rows = [[float(t), *a.tolist(), *b.tolist()] for t, a, b in zip(geo.t, gp, sp)]
            ext = "json" if args.format == "json" else "csv"
            _emit_table(out / f"geodesic_{idx}_{view}.{ext}", args.format, cols, rows,
                        {**conf, "pair": idx, "view": view})
    _log(f"geodesic: wrote {2 * len(pairs)} files to {out}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "equivalence": cmd_equivalence, "certify": cmd_certify,
            "geodesic": cmd_geodesic}


def _add_globals(p, suppress):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", metavar="PATH", default=d, help="JSON experiment config")
    p.add_argument("--out", metavar="PATH", default=d,
                   help="output file, or directory for multi-file commands")
    p.add_argument("--format", choices=("csv", "json"), default=d if suppress else "csv")
    p.add_argument("--seed", type=int, metavar="N", default=d, help="override the config seed")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="accelgeom",
        description="Accelerated methods, Bregman geometry and spectral decay certificates.")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "run": "run a discrete method, an ODE, or the quadratic_paths bundle",
        "equivalence": "check the seven accelerated forms agree under the state maps",
        "certify": "certify ODE decay rates from block eigenvalues",
        "geodesic": "emit dual-flat geodesics in primal and dual coordinates",
    }
    for name, h in helps.items():
        _add_globals(sub.add_parser(name, help=h), suppress=True)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with _Stage("config"):
            cfg = load_config(args.config, args.seed)
        return COMMANDS[args.command](args, cfg)
    except StageError as err:
        exc = err.exc
        if isinstance(exc, (SolverError, DivergenceError, DomainError)):
            code = EXIT_SOLVER
        elif isinstance(exc, (ConfigError, ConstructionError, UnsupportedOperation, ValueError,
                              TypeError, KeyError)):
            code = EXIT_CONFIG
        else:
            raise
        _log(f"error in stage '{err.stage}': {exc}")
        return code


if __name__ == "__main__":
    sys.exit(main())
