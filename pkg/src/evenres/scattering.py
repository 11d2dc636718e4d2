"""Scattering determinant on the logarithmic cover.

``det S = prod_l s_l**m_l`` is assembled in log form from the per-mode
coefficients of :mod:`evenres.radial`. The truncation rule starts at
``L0 = ceil(|lambda| R + 3 (|lambda| R)**(1/3) + 8)`` modes and stops once
three consecutive modes satisfy ``m_l |s_l - 1| < tail_tol``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _contour
from .cover import CoverPoint, as_z
from .errors import ContourError, DomainError, NumericError, PoleError, TruncationError
from .radial import StepPotential, integral_V, mode_ab, multiplicity, sphere_volume

L_MAX = 4000
_CHUNK = 32


@dataclass(frozen=True)
class DetSValue:
    value: complex
    at: CoverPoint
    modes_used: int
    tail_estimate: float
    log_value: complex = 0j

    def to_dict(self):
        return {"at": self.at.to_dict(), "re": self.value.real, "im": self.value.imag,
                "abs": abs(self.value), "modes_used": self.modes_used,
                "tail_estimate": self.tail_estimate}


@dataclass(frozen=True)
class ConstantCd:
    d: int

    @property
    def c_d(self) -> float:
        return math.pi * (2 * math.pi) ** (-self.d) * sphere_volume(self.d)


def c_d(d: int) -> float:
    return ConstantCd(d).c_d


def initial_modes(lam_r):
    lam_r = np.asarray(lam_r, dtype=float)
    return np.ceil(lam_r + 3.0 * np.cbrt(lam_r) + 8.0).astype(np.int64)


def _log_s(ratio, alpha, beta):
    """log s from ``ratio = s - 1`` where small, from ``beta/alpha`` otherwise."""
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.abs(ratio) < 0.5
        return np.where(small, np.log1p(np.where(small, ratio, 0)), np.log(beta / alpha))


def mode_terms(V: StepPotential, ls, z):
    """``(log s_l, s_l - 1)`` on a broadcast mode/point grid."""
    alpha, beta, _, delta = mode_ab(V, ls, z, with_delta=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = delta / alpha
    return _log_s(ratio, alpha, beta), ratio


def _truncated_sum(V, z, tail_tol, l_max, term_fn):
    """Sum ``m_l * g_l(z)`` with the adaptive truncation rule.

    ``term_fn(ls, z)`` returns ``(g, e)`` with ``e`` the per-mode magnitude
    ``|s_l - 1|`` (or its analogue) used for the stopping test.
    """
    if not tail_tol > 0:
        raise DomainError("tail_tol must be positive", tail_tol=tail_tol)
    z = as_z(z).ravel()
    n = z.size
    L0 = initial_modes(np.exp(z.real) * V.R)
    total = np.zeros(n, dtype=complex)
    used = np.zeros(n, dtype=np.int64)
    tail = np.zeros(n)
    consec = np.zeros(n, dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    l = 0
    while not done.all():
        if l >= l_max:
            raise TruncationError("mode sum did not converge", l_max=l_max,
                                  last_tail=float(np.max(tail[~done], initial=0.0)))
        act = np.flatnonzero(~done)
        hi = min(l + max(_CHUNK, int(L0[act].max()) - l), l_max)
        ls = np.arange(l, hi)
        g, e = term_fn(ls[:, None], z[act][None, :])
        alive = np.ones(act.size, dtype=bool)
        for i, li in enumerate(ls):
            m = multiplicity(V.d, li)
            idx = act[alive]
            total[idx] += m * g[i, alive]
            term = m * e[i, alive]
            if not np.all(np.isfinite(term)):
                raise NumericError("non-finite mode term", l=int(li))
            consec[idx] = np.where(term < tail_tol, consec[idx] + 1, 0)
            tail[idx] = 2.0 * term
            fin = (li + 1 >= L0[idx]) & (consec[idx] >= 3)
            if fin.any():
                used[idx[fin]] = li + 1
                done[idx[fin]] = True
                alive[np.flatnonzero(alive)[fin]] = False
            if not alive.any():
                break
        l = hi
    return total, used, tail


def log_det_s_many(V: StepPotential, z, tail_tol=1e-12, l_max=L_MAX):
    """Vectorised ``log det S`` at complex ``z``; returns ``(log_value, modes_used, tail)``."""
    shape = np.shape(as_z(z))
    if V.is_zero:
        z = as_z(z).ravel()
        return (np.zeros(shape, dtype=complex), initial_modes(np.exp(z.real) * V.R).reshape(shape),
                np.zeros(shape))
    total, used, tail = _truncated_sum(V, z, tail_tol, l_max, lambda ls, zz: _abs_second(mode_terms(V, ls, zz)))
    return total.reshape(shape), used.reshape(shape), tail.reshape(shape)


def _abs_second(pair):
    g, e = pair
    return g, np.abs(e)


def det_s(V: StepPotential, p: CoverPoint, tail_tol=1e-12, l_max=L_MAX) -> DetSValue:
    if not isinstance(p, CoverPoint):
        p = CoverPoint.from_z(p)
    lv, used, tail = log_det_s_many(V, p.z, tail_tol, l_max)
    lv = complex(lv)
    return DetSValue(complex(np.exp(lv)), p, int(used), float(tail), lv)


def mobius(s, k):
    """Per-eigenvalue sheet shift ``((k+1)s - k)/(ks - (k-1))``."""
    s = np.asarray(s, dtype=complex)
    den = k * s - (k - 1)
    if np.any(den == 0):
        raise PoleError("pole of the sheet-shift map", k=k)
    return (k + 1) * s / den - k / den


def sheet_shift_mobius(s: complex, k: int) -> complex:
    s = complex(s)
    den = k * s - (k - 1)
    if den == 0:
        raise PoleError("pole of the sheet-shift map (resonance at the shifted point)", s=s, k=k)
    return ((k + 1) * s - k) / den


def mobius_magnitude(t, r):
    """``f(t, r) = 2t / (1 - 2rt + 2r**2 t)``: ``|M(e^{i theta}, r) - 1|**2`` with ``t = 1 - cos theta``."""
    return 2 * t / (1 - 2 * r * t + 2 * r * r * t)


def log_det_s_shifted(V: StepPotential, z, k: int, tail_tol=1e-12, l_max=L_MAX):
    """``log det S`` at ``e^{ik pi}`` times the base points, from base-sheet ``s_l`` only."""
    def term(ls, zz):
        logs, ratio = mode_terms(V, ls, zz)
        den = 1.0 + k * ratio
        if np.any(den == 0):
            raise PoleError("pole of the sheet-shift map", k=k)
        shifted = ratio / den                     # Moebius(s, k) - 1
        with np.errstate(divide="ignore", invalid="ignore"):
            small = np.abs(shifted) < 0.5
            g = np.where(small, np.log1p(np.where(small, shifted, 0)), np.log(1.0 + shifted))
        return g, np.abs(ratio)
    if V.is_zero:
        return np.zeros(np.shape(as_z(z)), dtype=complex)
    total, _, _ = _truncated_sum(V, z, tail_tol, l_max, term)
    return total.reshape(np.shape(as_z(z)))


def log_deriv_det_s(V: StepPotential, lam: float, tail_tol=1e-12, h=1e-3, npts=16,
                    l_max=L_MAX) -> complex:
    """``d/dlambda log det S`` at real ``lambda > 0`` by Cauchy differentiation in z."""
    lam = float(lam)
    if not lam > 0:
        raise DomainError("lambda must be positive", lam=lam)
    if V.is_zero:
        return 0j
    z0 = math.log(lam)
    _, used, _ = log_det_s_many(V, z0, tail_tol, l_max)
    ls = np.arange(int(used))[:, None]
    m = np.array([multiplicity(V.d, l) for l in ls.ravel()], dtype=float)
    theta = 2 * math.pi * np.arange(npts) / npts
    _, f0 = mode_terms(V, ls, np.array([z0])[None, :])
    f0 = f0[:, 0]
    for _ in range(4):
        _, fc = mode_terms(V, ls, (z0 + h * np.exp(1j * theta))[None, :])
        s0 = np.abs(1.0 + f0)
        sc = np.abs(1.0 + fc)
        if np.all(sc.min(axis=1) > 0.2 * s0) and np.all(sc.max(axis=1) < 5.0 * s0):
            fp = (fc * np.exp(-1j * theta)).mean(axis=1) / h
            return complex(np.sum(m * fp / (1.0 + f0)) / lam)
        h /= 4.0
    raise NumericError("derivative circle keeps meeting a zero of s_l", lam=lam, h=h)


def born_leading(V: StepPotential, lam: float) -> complex:
    lam = float(lam)
    if not lam > 0:
        raise DomainError("lambda must be positive", lam=lam)
    d = V.d
    return -1j * c_d(d) * (d - 2) * integral_V(V) * lam ** (d - 3)


def mode_windings(V: StepPotential, ls, center, radius):
    """Winding numbers of ``alpha_l`` and ``beta_l`` around a circle in z."""
    ls = np.asarray(ls, dtype=np.int64)

    def f(zs):
        a, b, _ = mode_ab(V, ls[:, None], zs[None, :])
        return np.concatenate([a, b], axis=0)
    w, _ = _contour.winding(f, _contour.circle(center, radius))
    w = _contour.integer_winding(w)
    return w[:ls.size], w[ls.size:]


def msc(V: StepPotential, p: CoverPoint, radius=1e-3, tail_tol=1e-12, retries=3) -> int:
    """Signed order of ``det S`` at ``p``: zeros count positive, poles negative."""
    if not isinstance(p, CoverPoint):
        p = CoverPoint.from_z(p)
    if V.is_zero:
        return 0
    # modes beyond the truncation point have s_l within tail_tol of 1 near p;
    # p itself is not probed since it is typically a zero of some alpha_l
    z_probe = p.z + radius * np.exp(2j * math.pi * np.arange(8) / 8)
    _, used, _ = log_det_s_many(V, z_probe, tail_tol)
    ls = np.arange(int(used.max()))
    m = np.array([multiplicity(V.d, l) for l in ls])
    last = None
    for _ in range(retries + 1):
        try:
            wa, wb = mode_windings(V, ls, p.z, radius)
            return int(np.sum(m * (wb - wa)))
        except ContourError as exc:
            last = exc
            radius *= 0.7
    raise ContourError("msc winding unresolved", radius=radius, **last.payload)
