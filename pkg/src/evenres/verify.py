"""Checks of the asymptotic and structural identities satisfied by det S.

Each check returns a :class:`VerificationReport`; ``passed`` is true exactly
when every listed residual is within its tolerance.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .cover import CoverPoint, conjugate
from .errors import InputError, PoleError
from .finder import (Resonance, SearchWindow, find_eigenvalues, find_resonances,
                     resolvent_multiplicity)
from .heat import HeatSample, heat_trace, heat_trace_many
from .radial import StepPotential, integral_V, integral_V2, multiplicities
from .scattering import (c_d, log_det_s_many, log_det_s_shifted, log_deriv_det_s, mode_terms,
                         msc)

__all__ = ["VerificationReport", "HeatSample", "HeatCoefficients", "check_high_energy",
           "check_low_energy", "check_klimit", "check_eigenvalue_lattice",
           "check_multiplicity_relation", "check_heat", "heat_trace", "heat_coefficients",
           "compare_resonance_sets", "zero_energy_anomaly", "fit_exponent"]


@dataclass
class VerificationReport:
    check_name: str
    inputs: dict
    residuals: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    exponents: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    skipped: bool = False
    runtime: float = 0.0

    def record(self, name, value, tol, upper=True):
        """Store a residual with its bound; ``upper=False`` means value >= tol."""
        self.residuals[name] = float(value)
        self.tolerances[name] = (("<=" if upper else ">="), float(tol))

    @property
    def passed(self) -> bool:
        for name, (op, tol) in self.tolerances.items():
            v = self.residuals[name]
            if not math.isfinite(v):
                return False
            if op == "<=" and not v <= tol:
                return False
            if op == ">=" and not v >= tol:
                return False
        return True

    def to_dict(self):
        return {"check": self.check_name, "inputs": self.inputs, "residuals": self.residuals,
                "tolerances": {k: list(v) for k, v in self.tolerances.items()},
                "exponents": self.exponents, "notes": self.notes, "skipped": self.skipped,
                "pass": self.passed, "runtime": self.runtime}


def fit_exponent(x, y):
    """Least-squares slope of log|y| against log x."""
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y))
    keep = y > 0
    if keep.sum() < 2:
        return -math.inf
    return float(np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)[0])


def _top_decade(x):
    x = np.asarray(x, dtype=float)
    return x >= x.max() / 10


# -- high and low energy -----------------------------------------------------------

def check_high_energy(V: StepPotential, lam_grid, tail_tol=1e-12, coef_tol=0.02):
    """Large-lambda behaviour of the scattering phase derivative.

    ``r(lambda) = (1/i) d/dlambda log det S + (d-2) c_d (int V) lambda^{d-3}``
    must decay with fitted slope at most ``d - 3.4`` (``-1`` when ``d = 2``,
    where the leading term vanishes); for ``d >= 4`` the coefficient of
    ``lambda^{d-3}`` over the top half of the grid must match
    ``-(d-2) c_d int V`` to ``coef_tol``.
    """
    t0 = time.perf_counter()
    lam = np.sort(np.asarray(lam_grid, dtype=float))
    if lam.size < 6:
        raise InputError("need at least 6 grid points for a fit", n=int(lam.size))
    d = V.d
    lead = -(d - 2) * c_d(d) * integral_V(V)
    rep = VerificationReport("high_energy", {"d": d, "lambda_min": float(lam[0]),
                                             "lambda_max": float(lam[-1]), "n": int(lam.size)})
    L = np.array([log_deriv_det_s(V, x, tail_tol) for x in lam]) / 1j
    r = L.real - lead * lam ** (d - 3)
    rep.residuals["max_imag_part"] = float(np.max(np.abs(L.imag)))
    if np.all(r == 0):
        rep.exponents["slope"] = -math.inf
        rep.notes.append("residual identically zero")
    else:
        top = _top_decade(lam)
        slope = fit_exponent(lam[top], r[top])
        rep.exponents["slope"] = slope
        rep.record("slope", slope, d - 3.4 if d >= 4 else -1.0)
    if d >= 4:
        half = lam >= np.median(lam)
        coef = float(np.mean(L.real[half] / lam[half] ** (d - 3)))
        rep.exponents["coefficient"] = coef
        rep.exponents["expected_coefficient"] = lead
        if lead != 0:
            rep.record("coefficient_rel_error", abs(coef / lead - 1), coef_tol)
    rep.runtime = time.perf_counter() - t0
    return rep


def zero_energy_anomaly(V: StepPotential, lam=(1e-5, 1e-4, 1e-3), tail_tol=1e-12):
    """Heuristic flag for zero-energy resonances.

    Without an anomaly ``det S -> 1`` at threshold and ``lambda phi'`` shrinks
    as ``lambda -> 0`` (like ``1/log^2`` in two dimensions, like a positive
    power otherwise). Growth toward zero, or ``det S`` far from 1 at the
    smallest sample, raises the flag.
    """
    if V.is_zero:
        return False, {}
    lam = np.asarray(lam, dtype=float)
    g = np.array([abs(lam_i * log_deriv_det_s(V, lam_i, tail_tol)) for lam_i in lam])
    dev = float(abs(np.exp(log_det_s_many(V, math.log(lam[0]), tail_tol)[0]) - 1))
    limit = 0.8 if V.d == 2 else 1e-2
    flag = bool(dev > limit or g[0] > 1.05 * g[-1])
    return flag, {"lambda_phi_prime": g.tolist(), "detS_deviation": dev}


def check_low_energy(V: StepPotential, lam=None, tail_tol=1e-12, slack=0.2):
    """Low-energy bound ``|d/dlambda log det S| <= C lambda^{d-3} |log lambda|`` for d >= 4."""
    t0 = time.perf_counter()
    if V.d < 4:
        raise InputError("low-energy check needs d >= 4", d=V.d)
    if lam is None:
        lam = np.geomspace(1e-4, 1e-1, 16)
    lam = np.asarray(lam, dtype=float)
    rep = VerificationReport("low_energy", {"d": V.d, "lambda_min": float(lam.min()),
                                            "lambda_max": float(lam.max())})
    if V.is_zero:
        rep.notes.append("V = 0: log-derivative identically zero")
        rep.runtime = time.perf_counter() - t0
        return rep
    flag, info = zero_energy_anomaly(V, tail_tol=tail_tol)
    if flag:
        rep.skipped = True
        rep.notes.append(f"zero-energy anomaly flagged, check skipped: {info}")
        rep.runtime = time.perf_counter() - t0
        return rep
    vals = np.array([abs(log_deriv_det_s(V, x, tail_tol)) for x in lam])
    e = fit_exponent(lam, vals)
    rep.exponents["exponent"] = e
    rep.record("exponent", e, V.d - 3 - slack, upper=False)
    rep.runtime = time.perf_counter() - t0
    return rep


# -- sheet limit -------------------------------------------------------------------

def klimit_values(V: StepPotential, rho, ks, tail_tol=1e-12):
    """``det S(rho e^{ik pi})`` from the per-mode sheet-shift map; poles give nan."""
    z = math.log(rho)
    ls_terms = _base_modes(V, z, tail_tol)
    out = []
    for k in ks:
        try:
            out.append(complex(np.exp(_mobius_log(V, ls_terms, int(k)))))
        except PoleError:
            out.append(complex("nan"))
    return np.array(out)


def _base_modes(V, z, tail_tol):
    _, used, _ = log_det_s_many(V, z, tail_tol)
    ls = np.arange(int(used))
    _, ratio = mode_terms(V, ls, z)
    return multiplicities(V.d, ls).astype(float), np.asarray(ratio)


def _mobius_log(V, terms, k):
    m, ratio = terms
    den = 1.0 + k * ratio
    if np.any(den == 0):
        raise PoleError("pole of the sheet-shift map", k=k)
    return np.sum(m * np.log1p(ratio / den))


def check_klimit(V: StepPotential, rho=3.0, k_max=10 ** 4, tail_tol=1e-12, cross_tol=1e-7):
    """``det S(rho e^{ik pi}) -> 1`` like ``1/k`` and agreement of direct and sheet-shift values."""
    t0 = time.perf_counter()
    rep = VerificationReport("klimit", {"rho": rho, "k_max": k_max, "d": V.d})
    z = math.log(rho)
    worst = 0.0
    for k in range(1, 6):
        try:
            direct = complex(log_det_s_many(V, z + 1j * k * math.pi, tail_tol)[0])
            shifted = complex(log_det_s_shifted(V, z, k, tail_tol))
        except PoleError:
            rep.notes.append(f"sheet-shift pole at k={k}, skipped")
            continue
        worst = max(worst, abs(np.exp(direct - shifted) - 1))
    rep.record("direct_vs_mobius", worst, cross_tol)
    ks = np.unique(np.geomspace(1, k_max, 41).round().astype(int))
    vals = klimit_values(V, rho, ks, tail_tol)
    dev = np.abs(vals - 1)
    ok = np.isfinite(dev)
    if (~ok).any():
        rep.notes.append(f"sheet-shift poles at k={ks[~ok].tolist()}, skipped")
    rep.residuals["dev_at_k_max"] = float(dev[-1])
    if V.is_zero or np.all(dev[ok] == 0):
        rep.notes.append("det S = 1 on every sheet")
    else:
        top = _top_decade(ks) & ok
        e = fit_exponent(ks[top], dev[top])
        rep.exponents["decay"] = e
        rep.record("decay_exponent_low", e, -1.3, upper=False)
        rep.record("decay_exponent_high", e, -0.7)
        rep.record("dev_at_k_max", dev[-1], 100.0 / k_max)
    rep.runtime = time.perf_counter() - t0
    return rep


# -- eigenvalue lattice and multiplicities ------------------------------------------

def _lattice_point(rho, k):
    return CoverPoint(math.log(rho), math.pi / 2 + k * math.pi)


def lattice_resonances(V, rho, k, half_width=0.05):
    p = _lattice_point(rho, k)
    win = SearchWindow((p.x - half_width, p.x + half_width), (p.y - half_width, p.y + half_width))
    return [r for r in find_resonances(V, win) if abs(r.z.z - p.z) < 1e-6]


def check_eigenvalue_lattice(V: StepPotential, ks=range(-2, 3), eigenvalues=None):
    """Eigenvalue points ``rho e^{i pi (k + 1/2)}`` across sheets.

    Every eigenvalue must appear on the physical sheet with multiplicity
    ``m_0``, and at each lattice point the resolvent multiplicities must
    satisfy ``mu(p) - mu(conj p) = -m_sc(det S, p)``. The full lattice
    (a resonance of multiplicity ``m_0`` at every k) is required only when
    ``det S`` shows no pole at the lattice points; otherwise its status is
    reported per k.
    """
    t0 = time.perf_counter()
    rep = VerificationReport("eigenvalue_lattice", {"d": V.d, "k": list(ks)})
    eig = find_eigenvalues(V) if eigenvalues is None else eigenvalues
    if not eig:
        rep.notes.append("no negative eigenvalues: vacuous")
        rep.runtime = time.perf_counter() - t0
        return rep
    for i, (rho, m0) in enumerate(eig):
        phys = lattice_resonances(V, rho, 0)
        rep.record(f"eig{i}_physical_mu_error", abs(sum(r.mu_contribution for r in phys) - m0), 0)
        poles = False
        lattice = {}
        for k in ks:
            p = _lattice_point(rho, k)
            mu_p = resolvent_multiplicity(V, p)
            mu_c = resolvent_multiplicity(V, conjugate(p))
            m = msc(V, p)
            poles |= m < 0
            rep.record(f"eig{i}_k{k}_relation", abs(mu_p - mu_c + m), 0)
            lattice[k] = mu_p
        rep.exponents[f"eig{i}_lattice_mu"] = {str(k): v for k, v in lattice.items()}
        full = all(v == m0 for v in lattice.values())
        if poles:
            rep.notes.append(f"eigenvalue {i} (rho={rho:.12g}): det S has poles on the lattice, "
                             f"full lattice {'present' if full else 'absent'}: {lattice}")
        else:
            rep.record(f"eig{i}_full_lattice", 0 if full else 1, 0)
    rep.runtime = time.perf_counter() - t0
    return rep


def check_multiplicity_relation(V: StepPotential, resonance_list):
    """``mu(p) - mu(conj p) = -m_sc(det S, p)`` with exact integers at every listed point."""
    t0 = time.perf_counter()
    rep = VerificationReport("multiplicity_relation", {"d": V.d, "n": len(resonance_list)})
    bad = 0
    rows = []
    for r in resonance_list:
        p = r.z if isinstance(r, Resonance) else r
        if not isinstance(p, CoverPoint):
            p = CoverPoint.from_z(p)
        lhs = resolvent_multiplicity(V, p) - resolvent_multiplicity(V, conjugate(p))
        rhs = -msc(V, p)
        rows.append((p.x, p.y, lhs, rhs))
        bad += lhs != rhs
    rep.exponents["rows"] = rows
    rep.record("mismatches", bad, 0)
    rep.runtime = time.perf_counter() - t0
    return rep


# -- heat coefficients ---------------------------------------------------------------

@dataclass(frozen=True)
class HeatCoefficients:
    values: tuple
    uncertainties: tuple
    condition: float
    samples: tuple = ()

    def to_dict(self):
        return {"C": list(self.values), "sigma": list(self.uncertainties),
                "condition": self.condition}


def heat_coefficients(V: StepPotential, t_grid, j_max=3, quad_tol=1e-8, samples=None,
                      max_condition=1e12):
    """Least-squares ``H(t) t^{d/2} = sum_{j=1}^{j_max} C_j t^j`` over ``t_grid``."""
    t = np.sort(np.asarray(t_grid, dtype=float))
    if t.size < 8 or t.max() > 0.05 or t.min() <= 0:
        raise InputError("t grid must have >= 8 points in (0, 0.05]", n=int(t.size))
    if samples is None:
        samples = heat_trace_many(V, t, quad_tol)
    h = np.array([s.H for s in samples])
    err = np.array([max(s.quadrature_error, 1e-14) for s in samples])
    # divide through by t so the columns are 1, t, t^2, ...
    y = h * t ** (V.d / 2) / t
    sig = err * t ** (V.d / 2) / t
    A = np.vander(t, j_max, increasing=True)
    scale = np.abs(A).max(axis=0)
    As = A / scale
    w = 1.0 / sig
    cond = float(np.linalg.cond(As * w[:, None]))
    if cond > max_condition:
        raise InputError("ill-conditioned heat fit", condition=cond)
    coef, *_ = np.linalg.lstsq(As * w[:, None], y * w, rcond=None)
    resid = y - As @ coef
    dof = max(t.size - j_max, 1)
    s2 = float(np.sum((resid * w) ** 2) / dof)
    cov = np.linalg.inv((As * w[:, None]).T @ (As * w[:, None])) * max(s2, 1.0)
    unc = np.sqrt(np.diag(cov)) / scale
    return HeatCoefficients(tuple(float(c) for c in coef / scale), tuple(float(u) for u in unc),
                            cond, tuple(samples))


def check_heat(V: StepPotential, t_grid=(1e-3,), quad_tol=1e-8, tail_tol=1e-12, rel_tol=0.02):
    """Relative heat trace against its two leading small-``t`` terms.

    ``H(t) (4 pi t)^{d/2} = -t int V + (t^2/2) int V^2 + ...``; the residual
    is measured at the smallest ``t`` relative to ``t |int V|``.
    """
    t0 = time.perf_counter()
    ts = np.sort(np.asarray(t_grid, dtype=float))
    rep = VerificationReport("heat", {"d": V.d, "t": ts.tolist()})
    if V.is_zero:
        rep.notes.append("V = 0: relative heat trace identically zero")
        rep.runtime = time.perf_counter() - t0
        return rep
    flag, info = zero_energy_anomaly(V, tail_tol=tail_tol)
    if flag:
        rep.skipped = True
        rep.notes.append(f"zero-energy anomaly flagged, check skipped: {info}")
        rep.runtime = time.perf_counter() - t0
        return rep
    samples = heat_trace_many(V, ts, quad_tol, tail_tol)
    rep.exponents["H"] = [s.H for s in samples]
    rep.record("quadrature_error", max(s.quadrature_error for s in samples), 10 * quad_tol)
    t = float(ts[0])
    iv, iv2 = integral_V(V), integral_V2(V)
    model = (-t * iv + 0.5 * t * t * iv2) / (4 * math.pi * t) ** (V.d / 2)
    scale = t * abs(iv) / (4 * math.pi * t) ** (V.d / 2)
    if scale > 0:
        rep.record("small_t_rel_error", abs(samples[0].H - model) / scale, rel_tol)
    else:
        rep.notes.append("int V = 0: leading term absent, no small-t comparison")
    rep.runtime = time.perf_counter() - t0
    return rep


# -- resonance-set comparison ----------------------------------------------------------

@dataclass
class ComparisonReport:
    only_first: list
    only_second: list
    det_ratio_residual: float

    @property
    def empty(self) -> bool:
        return not self.only_first and not self.only_second

    def to_dict(self):
        return {"only_first": [r.to_dict() for r in self.only_first],
                "only_second": [r.to_dict() for r in self.only_second],
                "det_ratio_residual": self.det_ratio_residual, "empty": self.empty}


def compare_resonance_sets(V1: StepPotential, V2: StepPotential, window: SearchWindow,
                           tol=1e-6, probe=None, tail_tol=1e-12):
    """Symmetric multiset difference of the resonances in ``window`` (matching in z)."""
    if V1.d != V2.d:
        raise InputError("potentials must share the dimension", d1=V1.d, d2=V2.d)
    a = find_resonances(V1, window)
    b = find_resonances(V2, window)
    # expand by multiplicity so the comparison is a multiset one
    ea = [r for r in a for _ in range(r.mu_contribution)]
    eb = [r for r in b for _ in range(r.mu_contribution)]
    used = [False] * len(eb)
    only_a = []
    for r in ea:
        for j, s in enumerate(eb):
            if not used[j] and abs(r.z.z - s.z.z) < tol:
                used[j] = True
                break
        else:
            only_a.append(r)
    only_b = [s for j, s in enumerate(eb) if not used[j]]
    if probe is None:
        xs = np.linspace(window.x_range[0], window.x_range[1], 7)
        probe = (xs[:, None] + 1j * np.array([0.0, -0.5, -1.0])[None, :] * math.pi / 2).ravel()
    l1 = log_det_s_many(V1, probe, tail_tol)[0]
    l2 = log_det_s_many(V2, probe, tail_tol)[0]
    resid = float(np.max(np.abs(np.exp(l1 - l2) - 1)))
    return ComparisonReport(_dedupe(only_a), _dedupe(only_b), resid)


def _dedupe(items):
    out = []
    for r in items:
        if not any(r is s for s in out):
            out.append(r)
    return out
