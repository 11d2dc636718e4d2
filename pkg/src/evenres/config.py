"""Run configuration: a TOML file validated strictly before any computation.

Example::

    [potential]
    dimension = 2
    breakpoints = [1.0]
    values = [-5.0]

    [window]
    modulus = [0.5, 10.0]
    arg_over_pi = [-2.0, 0.0]

Unknown keys are rejected; every error names the offending field path.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, DomainError
from .finder import SearchWindow
from .radial import StepPotential

SUITES = ("all", "quick", "high_energy", "low_energy", "klimit", "eigenvalue_lattice",
          "multiplicity_relation", "heat")


@dataclass
class RunConfig:
    potential: StepPotential
    potential2: StepPotential | None = None
    window: SearchWindow | None = None
    tail_tol: float = 1e-12
    polish_tol: float = 1e-10
    quad_tol: float = 1e-8
    l_max: int = 4000
    sweep_l_max: int = 400
    k_max: int = 10000
    workers: int = 1
    out: str = "out"
    detS: dict = field(default_factory=dict)
    count: dict = field(default_factory=dict)
    heat: dict = field(default_factory=dict)
    verify: dict = field(default_factory=dict)


def _fail(path, msg, **kw):
    raise ConfigError(f"{path}: {msg}", field=path, **kw)


def _check_keys(section, allowed, path):
    if not isinstance(section, dict):
        _fail(path, "expected a table")
    for k in section:
        if k not in allowed:
            _fail(f"{path}.{k}" if path else k, "unknown field",
                  allowed=sorted(allowed))


def _num(v, path, positive=False, integer=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(path, "expected a number", value=repr(v))
    if integer and not isinstance(v, int):
        _fail(path, "expected an integer", value=v)
    if not math.isfinite(v):
        _fail(path, "must be finite", value=v)
    if positive and not v > 0:
        _fail(path, "must be positive", value=v)
    return v


def _num_list(v, path, length=None, **kw):
    if not isinstance(v, list):
        _fail(path, "expected an array", value=repr(v))
    if length is not None and len(v) != length:
        _fail(path, f"expected {length} entries", value=v)
    return [_num(x, f"{path}[{i}]", **kw) for i, x in enumerate(v)]


def _potential(sec, path):
    _check_keys(sec, {"dimension", "breakpoints", "values", "radius"}, path)
    for k in ("dimension", "breakpoints", "values"):
        if k not in sec:
            _fail(f"{path}.{k}", "missing")
    d = _num(sec["dimension"], f"{path}.dimension", integer=True)
    bps = _num_list(sec["breakpoints"], f"{path}.breakpoints")
    vals = _num_list(sec["values"], f"{path}.values")
    radius = _num(sec.get("radius", 1.0), f"{path}.radius", positive=True)
    try:
        return StepPotential(d, tuple(bps), tuple(vals), default_radius=radius)
    except DomainError as exc:
        extra = dict(exc.payload)
        sub = extra.pop("field", "")
        _fail(f"{path}.{sub}" if sub else path, str(exc), **extra)


def _window(sec, path, polish_tol, sweep_l_max):
    _check_keys(sec, {"modulus", "arg", "arg_over_pi", "x", "y", "modes", "seed"}, path)
    if "x" in sec or "y" in sec:
        if "modulus" in sec:
            _fail(path, "give either x/y or modulus/arg, not both")
        x = _num_list(sec.get("x"), f"{path}.x", length=2)
        y = _num_list(sec.get("y"), f"{path}.y", length=2)
    else:
        if "modulus" not in sec:
            _fail(f"{path}.modulus", "missing")
        mod = _num_list(sec["modulus"], f"{path}.modulus", length=2, positive=True)
        x = [math.log(mod[0]), math.log(mod[1])]
        if ("arg" in sec) == ("arg_over_pi" in sec):
            _fail(path, "give exactly one of arg (radians) or arg_over_pi")
        if "arg" in sec:
            y = _num_list(sec["arg"], f"{path}.arg", length=2)
        else:
            y = [v * math.pi for v in _num_list(sec["arg_over_pi"], f"{path}.arg_over_pi", length=2)]
    modes = None
    if "modes" in sec:
        modes = tuple(_num_list(sec["modes"], f"{path}.modes", integer=True))
    seed = _num(sec.get("seed", 0), f"{path}.seed", integer=True)
    try:
        return SearchWindow(tuple(x), tuple(y), modes, polish_tol=polish_tol,
                            l_max=sweep_l_max, seed=seed)
    except DomainError as exc:
        _fail(f"{path}.{exc.payload.get('field', '')}".rstrip("."), str(exc))


def _detS(sec, path):
    _check_keys(sec, {"modulus", "num", "spacing", "arg", "arg_over_pi", "points"}, path)
    out = {}
    if "points" in sec:
        pts = sec["points"]
        if not isinstance(pts, list):
            _fail(f"{path}.points", "expected an array of [x, y] pairs")
        out["points"] = [tuple(_num_list(p, f"{path}.points[{i}]", length=2)) for i, p in enumerate(pts)]
    if "modulus" in sec:
        out["modulus"] = _num_list(sec["modulus"], f"{path}.modulus", length=2, positive=True)
        out["num"] = _num(sec.get("num", 50), f"{path}.num", positive=True, integer=True)
        sp = sec.get("spacing", "linear")
        if sp not in ("linear", "log"):
            _fail(f"{path}.spacing", "must be 'linear' or 'log'", value=sp)
        out["spacing"] = sp
        if "arg" in sec and "arg_over_pi" in sec:
            _fail(path, "give at most one of arg or arg_over_pi")
        if "arg_over_pi" in sec:
            out["args"] = [v * math.pi for v in _num_list(sec["arg_over_pi"], f"{path}.arg_over_pi")]
        else:
            out["args"] = _num_list(sec.get("arg", [0.0]), f"{path}.arg")
    if not out:
        _fail(path, "needs 'points' or 'modulus'")
    return out


def _simple(sec, path, spec):
    _check_keys(sec, set(spec), path)
    out = {}
    for k, (kind, kw) in spec.items():
        if k not in sec:
            continue
        if kind == "num":
            out[k] = _num(sec[k], f"{path}.{k}", **kw)
        elif kind == "list":
            out[k] = _num_list(sec[k], f"{path}.{k}", **kw)
        elif kind == "str":
            if not isinstance(sec[k], str) or sec[k] not in kw["choices"]:
                _fail(f"{path}.{k}", f"must be one of {kw['choices']}", value=sec[k])
            out[k] = sec[k]
    return out


_TOP = {"potential", "potential2", "window", "tolerances", "limits", "run", "output", "detS",
        "count", "heat", "verify"}


def parse_config(data: dict) -> RunConfig:
    _check_keys(data, _TOP, "")
    if "potential" not in data:
        _fail("potential", "missing")
    tol = data.get("tolerances", {})
    _check_keys(tol, {"tail_tol", "polish", "quad_tol"}, "tolerances")
    lim = data.get("limits", {})
    _check_keys(lim, {"l_max", "sweep_l_max", "k_max"}, "limits")
    run = data.get("run", {})
    _check_keys(run, {"workers"}, "run")
    outp = data.get("output", {})
    _check_keys(outp, {"dir"}, "output")
    cfg = RunConfig(potential=_potential(data["potential"], "potential"))
    cfg.tail_tol = _num(tol.get("tail_tol", 1e-12), "tolerances.tail_tol", positive=True)
    cfg.polish_tol = _num(tol.get("polish", 1e-10), "tolerances.polish", positive=True)
    cfg.quad_tol = _num(tol.get("quad_tol", 1e-8), "tolerances.quad_tol", positive=True)
    cfg.l_max = _num(lim.get("l_max", 4000), "limits.l_max", positive=True, integer=True)
    cfg.sweep_l_max = _num(lim.get("sweep_l_max", 400), "limits.sweep_l_max", positive=True,
                           integer=True)
    cfg.k_max = _num(lim.get("k_max", 10000), "limits.k_max", positive=True, integer=True)
    cfg.workers = _num(run.get("workers", 1), "run.workers", positive=True, integer=True)
    if "dir" in outp:
        if not isinstance(outp["dir"], str) or not outp["dir"]:
            _fail("output.dir", "expected a non-empty string")
        cfg.out = outp["dir"]
    if "potential2" in data:
        cfg.potential2 = _potential(data["potential2"], "potential2")
        if cfg.potential2.d != cfg.potential.d:
            _fail("potential2.dimension", "must equal potential.dimension")
    if "window" in data:
        cfg.window = _window(data["window"], "window", cfg.polish_tol, cfg.sweep_l_max)
    if "detS" in data:
        cfg.detS = _detS(data["detS"], "detS")
    if "count" in data:
        cfg.count = _simple(data["count"], "count", {"r": ("list", {"positive": True})})
        if any(r <= 1 for r in cfg.count.get("r", [])):
            _fail("count.r", "every r must exceed 1")
    if "heat" in data:
        cfg.heat = _simple(data["heat"], "heat", {"t": ("list", {"positive": True}),
                                                   "j_max": ("num", {"positive": True,
                                                                     "integer": True})})
    if "verify" in data:
        cfg.verify = _simple(data["verify"], "verify", {
            "suite": ("str", {"choices": SUITES}),
            "lambda": ("list", {"positive": True}),
            "rho": ("num", {"positive": True}),
            "heat_t": ("list", {"positive": True}),
        })
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}", field="--config")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}", field="syntax")
    return parse_config(data)
