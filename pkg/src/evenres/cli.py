"""Command-line entry point.

    evenres <command> --config run.toml [--out DIR] [--workers N] [--suite NAME]

Commands: detS, resonances, eigenvalues, count, heat, verify, compare.
Exit status: 0 success, 1 a verification check failed, 2 invalid input,
3 numerical failure. Outputs are byte-identical for identical inputs.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import traceback

import numpy as np

from . import __version__
from .config import SUITES, RunConfig, load_config
from .errors import EvenresError, InputError
from .finder import SearchWindow, counting_window_filter, find_eigenvalues, find_resonances
from .heat import heat_trace_many
from .scattering import log_det_s_many
from . import verify as V_

COMMANDS = ("detS", "resonances", "eigenvalues", "count", "heat", "verify", "compare")


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


class _CsvOut:
    """CSV writer that flushes rows as they come (partial results survive failures)."""

    def __init__(self, path, header):
        self.fh = open(path, "w", newline="", encoding="utf-8")
        self.w = csv.writer(self.fh, lineterminator="\n")
        self.w.writerow(header)

    def rows(self, rows):
        for r in rows:
            self.w.writerow([_fmt(v) for v in r])
        self.fh.flush()

    def close(self):
        self.fh.close()


def _write_json(path, obj):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=True) + "\n")


def _clean(o):
    if isinstance(o, dict):
        return {str(k): _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (np.bool_,)):
        return bool(o)
    return o


# -- commands ------------------------------------------------------------------------

def cmd_detS(cfg: RunConfig, out):
    spec = cfg.detS or {"modulus": [0.2, 80.0], "num": 50, "spacing": "linear", "args": [0.0]}
    pts = list(spec.get("points", []))
    if "modulus" in spec:
        lo, hi = spec["modulus"]
        mods = (np.geomspace(lo, hi, spec["num"]) if spec["spacing"] == "log"
                else np.linspace(lo, hi, spec["num"]))
        pts += [(math.log(m), a) for a in spec["args"] for m in mods]
    w = _CsvOut(os.path.join(out, "detS.csv"),
                ["x", "y", "re_detS", "im_detS", "abs_detS", "modes_used", "tail_estimate"])
    try:
        for i in range(0, len(pts), 64):
            chunk = pts[i:i + 64]
            z = np.array([complex(x, y) for x, y in chunk])
            lv, used, tail = log_det_s_many(cfg.potential, z, cfg.tail_tol, cfg.l_max)
            val = np.exp(lv)
            w.rows([(x, y, v.real, v.imag, abs(v), u, t)
                    for (x, y), v, u, t in zip(chunk, val, used, tail)])
    finally:
        w.close()
    return 0


def _window(cfg):
    if cfg.window is None:
        raise InputError("this command needs a [window] section", field="window")
    return cfg.window


_RES_HEADER = ["x", "y", "modulus", "arg_over_pi", "mode_l", "order", "mu_contribution", "residual"]


def _res_row(r):
    return (r.z.x, r.z.y, r.z.modulus, r.z.y / math.pi, r.mode.l, r.order, r.mu_contribution,
            r.residual)


def cmd_resonances(cfg, out):
    res = find_resonances(cfg.potential, _window(cfg), workers=cfg.workers)
    w = _CsvOut(os.path.join(out, "resonances.csv"), _RES_HEADER)
    w.rows(_res_row(r) for r in res)
    w.close()
    flagged = [r.to_dict() for r in res if r.flagged or not r.polished]
    if flagged:
        _write_json(os.path.join(out, "resonances_flagged.json"), flagged)
    return 0


def cmd_eigenvalues(cfg, out):
    eig = find_eigenvalues(cfg.potential)
    w = _CsvOut(os.path.join(out, "eigenvalues.csv"), ["x", "y", "kappa", "energy", "multiplicity"])
    w.rows((math.log(k), math.pi / 2, k, -k * k, m) for k, m in eig)
    w.close()
    return 0


def cmd_count(cfg, out):
    rs = sorted(cfg.count.get("r", [1.5, 2.0, 3.0, 4.0]))
    lr = math.log(rs[-1])
    win = SearchWindow((-lr, lr), (-lr, lr), polish_tol=cfg.polish_tol, l_max=cfg.sweep_l_max)
    res = find_resonances(cfg.potential, win, workers=cfg.workers)
    w = _CsvOut(os.path.join(out, "count.csv"), ["r", "N"])
    w.rows((r, sum(x.mu_contribution for x in counting_window_filter(res, r))) for r in rs)
    w.close()
    return 0


def cmd_heat(cfg, out):
    ts = sorted(cfg.heat.get("t", [1e-3, 2e-3, 4e-3, 8e-3, 1.5e-2, 2.5e-2, 3.5e-2, 5e-2]))
    V = cfg.potential
    flag, info = V_.zero_energy_anomaly(V, tail_tol=cfg.tail_tol)
    if flag:
        _write_json(os.path.join(out, "heat.json"), {"skipped": True, "anomaly": info})
        return 1
    samples = heat_trace_many(V, ts, cfg.quad_tol, cfg.tail_tol)
    w = _CsvOut(os.path.join(out, "heat.csv"), ["t", "H", "quadrature_error"])
    w.rows((s.t, s.H, s.quadrature_error) for s in samples)
    w.close()
    small = [s for s in samples if s.t <= 0.05]
    if len(small) >= 8:
        fit = V_.heat_coefficients(V, [s.t for s in small], cfg.heat.get("j_max", 3),
                                   samples=small)
        _write_json(os.path.join(out, "heat_coefficients.json"), fit.to_dict())
    return 0


def verification_reports(cfg: RunConfig, suite="all"):
    V = cfg.potential
    p = cfg.verify
    names = {"all": ["high_energy", "low_energy", "klimit", "eigenvalue_lattice",
                     "multiplicity_relation", "heat"],
             "quick": ["klimit", "high_energy", "eigenvalue_lattice"]}.get(suite, [suite])
    reports = []
    for name in names:
        if name == "high_energy":
            lam = p.get("lambda") or list(np.linspace(8.0, 80.0, 16))
            reports.append(V_.check_high_energy(V, lam, cfg.tail_tol))
        elif name == "low_energy":
            if V.d < 4:
                rep = V_.VerificationReport("low_energy", {"d": V.d}, skipped=True)
                rep.notes.append("applies to d >= 4 only")
                reports.append(rep)
            else:
                reports.append(V_.check_low_energy(V, tail_tol=cfg.tail_tol))
        elif name == "klimit":
            reports.append(V_.check_klimit(V, p.get("rho", 3.0), cfg.k_max, cfg.tail_tol))
        elif name == "eigenvalue_lattice":
            reports.append(V_.check_eigenvalue_lattice(V))
        elif name == "multiplicity_relation":
            win = cfg.window or SearchWindow.from_modulus_arg(0.5, 10.0, -2 * math.pi, 0.0)
            res = find_resonances(V, win, workers=cfg.workers)
            reports.append(V_.check_multiplicity_relation(V, res))
        elif name == "heat":
            reports.append(V_.check_heat(V, p.get("heat_t", [1e-3]), cfg.quad_tol, cfg.tail_tol))
    return reports


def cmd_verify(cfg, out, suite=None):
    suite = suite or cfg.verify.get("suite", "all")
    if suite not in SUITES:
        raise InputError(f"unknown suite {suite!r}", field="--suite", choices=list(SUITES))
    reports = verification_reports(cfg, suite)
    body = []
    for r in reports:
        d = r.to_dict()
        d.pop("runtime")
        body.append(d)
        print(f"{'PASS' if r.passed else 'FAIL'}{' (skipped)' if r.skipped else ''} {r.check_name}",
              file=sys.stderr)
    ok = all(r.passed for r in reports)
    _write_json(os.path.join(out, "verify.json"), {"suite": suite, "pass": ok, "checks": body})
    return 0 if ok else 1


def cmd_compare(cfg, out):
    if cfg.potential2 is None:
        raise InputError("compare needs a [potential2] section", field="potential2")
    rep = V_.compare_resonance_sets(cfg.potential, cfg.potential2, _window(cfg),
                                    tail_tol=cfg.tail_tol)
    _write_json(os.path.join(out, "compare.json"), rep.to_dict())
    return 0


_DISPATCH = {"detS": cmd_detS, "resonances": cmd_resonances, "eigenvalues": cmd_eigenvalues,
             "count": cmd_count, "heat": cmd_heat, "compare": cmd_compare}


def build_parser():
    ap = argparse.ArgumentParser(prog="evenres", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="TOML run configuration")
    ap.add_argument("--out", help="output directory (overrides [output].dir)")
    ap.add_argument("--workers", type=int, help="worker threads (overrides [run].workers)")
    ap.add_argument("--suite", choices=SUITES, help="verification suite for 'verify'")
    return ap


def run(command, cfg: RunConfig, out=None, suite=None) -> int:
    out = out or cfg.out
    os.makedirs(out, exist_ok=True)
    err_path = os.path.join(out, f"{command}.error.json")
    if os.path.exists(err_path):
        os.remove(err_path)
    try:
        if command == "verify":
            return cmd_verify(cfg, out, suite)
        return _DISPATCH[command](cfg, out)
    except EvenresError as exc:
        _write_json(err_path, {"status": "failed", "error": type(exc).__name__,
                               "message": str(exc), "payload": exc.payload})
        raise


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.workers is not None:
            if args.workers < 1:
                raise InputError("--workers must be >= 1", field="--workers")
            cfg.workers = args.workers
        return run(args.command, cfg, args.out, args.suite)
    except EvenresError as exc:
        payload = json.dumps(_clean(exc.payload), sort_keys=True, default=str)
        print(f"evenres: {type(exc).__name__}: {exc} {payload}", file=sys.stderr)
        return exc.exit_code
    except Exception:  # pragma: no cover - unexpected failures still map to a numeric error
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
