"""Relative heat trace from the scattering phase.

With ``phi(lambda) = arg det S(lambda)`` on the positive axis,

    H(t) = (1/2pi) int_0^inf phi'(lambda) exp(-t lambda^2) dlambda + sum_k m_k exp(t kappa_k^2)

(zero-energy constant assumed absent). The integral is split at a small
``a``, where ``phi(a)`` itself accounts for ``[0, a]`` because
``det S -> 1`` at threshold, and at ``lambda* = 5/sqrt(t)``, beyond which
the Born term is integrated in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gamma, gammaincc

from .errors import DomainError, QuadratureError
from .finder import find_eigenvalues
from .radial import StepPotential, integral_V
from .scattering import c_d, log_det_s_many, log_deriv_det_s

_A = 1e-3


@dataclass(frozen=True)
class HeatSample:
    t: float
    H: float
    quadrature_error: float

    def to_dict(self):
        return {"t": self.t, "H": self.H, "quadrature_error": self.quadrature_error}


def phase_derivative(V, lam, tail_tol=1e-12):
    """``phi'(lambda)``, real for real ``lambda``."""
    return log_deriv_det_s(V, lam, tail_tol).imag


def _born_tail(V, t, lam_star):
    # (1/2pi) int_{lam*}^inf (-(d-2) c_d intV lam^{d-3}) e^{-t lam^2} dlam, d = 2 gives 0
    d = V.d
    if d == 2:
        return 0.0
    k = -(d - 2) * c_d(d) * integral_V(V)
    n = d - 3
    # int_{L}^inf lam^n e^{-t lam^2} = Gamma((n+1)/2, t L^2) / (2 t^{(n+1)/2})
    s = (n + 1) / 2
    val = gammaincc(s, t * lam_star ** 2) * gamma(s) / (2 * t ** s)
    return k * val / (2 * math.pi)


def heat_trace_many(V: StepPotential, ts, quad_tol=1e-8, tail_tol=1e-12, eigenvalues=None):
    """``H(t)`` for an array of ``t``; returns a list of HeatSample."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if np.any(~(ts > 0)):
        raise DomainError("t must be positive", t=ts.tolist())
    if V.is_zero:
        return [HeatSample(float(t), 0.0, 0.0) for t in ts]
    if eigenvalues is None:
        eigenvalues = find_eigenvalues(V)
    a = _A / V.R
    lam_star = 5.0 / math.sqrt(ts.min())
    phi_a = float(log_det_s_many(V, math.log(a), tail_tol)[0].imag)

    def integrand(s):
        lam = math.exp(s)
        return phase_derivative(V, lam, tail_tol) * lam * np.exp(-ts * lam * lam)

    val, err = integrate.quad_vec(integrand, math.log(a), math.log(lam_star),
                                  epsabs=quad_tol, epsrel=quad_tol, limit=2000)
    if not np.all(np.isfinite(val)) or err > 10 * quad_tol * max(1.0, np.max(np.abs(val))):
        raise QuadratureError("heat quadrature did not converge", error=float(err))
    # [0, a]: phi(0+) = 0 and exp(-t lam^2) ~ 1 there
    first = phi_a * np.exp(-ts * a * a)
    out = []
    for i, t in enumerate(ts):
        h = (first[i] + val[i]) / (2 * math.pi) + _born_tail(V, t, lam_star)
        h += sum(m * math.exp(t * k * k) for k, m in eigenvalues)
        out.append(HeatSample(float(t), float(h), float(err) / (2 * math.pi)))
    return out


def heat_trace(V: StepPotential, t: float, quad_tol=1e-8, tail_tol=1e-12) -> HeatSample:
    return heat_trace_many(V, [t], quad_tol, tail_tol)[0]
