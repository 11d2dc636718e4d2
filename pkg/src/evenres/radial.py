"""Radial step potentials and per-mode scattering coefficients.

In the mode with Bessel order ``nu = l + (d-2)/2`` the Liouville-normal
radial function ``v = sqrt(r) w`` solves
``v'' + (mu2 - (nu**2 - 1/4)/r**2) v = 0`` with ``mu2 = lambda**2 - V(r)``.
Inside the support only functions entire in ``mu2`` are used; outside,
the regular solution is expanded as ``alpha h2 + beta h1`` in the continued
Hankel pair ``h_j = sqrt(r) H^{(j)}_nu(lambda r)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy import special

from . import specfun
from .cover import CoverPoint, as_z
from .errors import DomainError, RangeError

_ALLOWED_DIMENSIONS = (2, 4, 6, 8)


def sphere_volume(d: int) -> float:
    """Surface measure of the unit sphere S^{d-1}."""
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


@dataclass(frozen=True)
class StepPotential:
    """Radial potential equal to ``values[j]`` on ``[breakpoints[j-1], breakpoints[j])``.

    An empty step list is the zero potential; its matching radius is
    ``default_radius``.
    """
    d: int
    breakpoints: tuple = ()
    values: tuple = ()
    default_radius: float = field(default=1.0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d not in _ALLOWED_DIMENSIONS:
            raise DomainError(f"dimension must be one of {_ALLOWED_DIMENSIONS}", field="dimension",
                              value=self.d)
        object.__setattr__(self, "d", int(self.d))
        if len(self.breakpoints) != len(self.values):
            raise DomainError("breakpoints and values must have equal length", field="values",
                              n_breakpoints=len(self.breakpoints), n_values=len(self.values))
        prev = 0.0
        for i, b in enumerate(self.breakpoints):
            if not math.isfinite(b) or b <= prev:
                raise DomainError("breakpoints must be positive and strictly increasing",
                                  field=f"breakpoints[{i}]", value=b)
            prev = b
        for i, v in enumerate(self.values):
            if not math.isfinite(v):
                raise DomainError("potential values must be finite reals", field=f"values[{i}]",
                                  value=v)
        if not self.default_radius > 0:
            raise DomainError("default radius must be positive", value=self.default_radius)

    @classmethod
    def well(cls, d, depth, radius=1.0):
        """Single step of height ``depth`` on the ball of given radius."""
        return cls(d, (radius,), (depth,))

    @classmethod
    def zero(cls, d, radius=1.0):
        return cls(d, (), (), default_radius=radius)

    @property
    def R(self) -> float:
        return self.breakpoints[-1] if self.breakpoints else self.default_radius

    @property
    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.values)

    @property
    def half_order(self) -> int:
        return (self.d - 2) // 2

    def refined(self, extra: Sequence[float]) -> "StepPotential":
        """Same function with additional (redundant) breakpoints inside the support."""
        pts = sorted(set(self.breakpoints) | {float(e) for e in extra if 0 < e < self.R})
        vals = [self(r) for r in [(a + b) / 2 for a, b in zip([0.0] + pts[:-1], pts)]]
        return StepPotential(self.d, tuple(pts), tuple(vals), self.default_radius)

    def __call__(self, r: float) -> float:
        for b, v in zip(self.breakpoints, self.values):
            if r < b:
                return v
        return 0.0

    def to_dict(self):
        return {"dimension": self.d, "breakpoints": list(self.breakpoints),
                "values": list(self.values)}


def multiplicity(d: int, l: int) -> int:
    """Dimension of the degree-``l`` spherical harmonics on S^{d-1}."""
    if isinstance(d, bool) or int(d) != d or d < 2 or d % 2:
        raise DomainError("dimension must be an even integer >= 2", d=d)
    if int(l) != l or l < 0:
        raise DomainError("angular momentum must be a nonnegative integer", l=l)
    d, l = int(d), int(l)
    return math.comb(l + d - 1, d - 1) - (math.comb(l + d - 3, d - 1) if l >= 2 else 0)


@dataclass(frozen=True)
class ModeIndex:
    l: int
    d: int

    @property
    def nu(self) -> int:
        return self.l + (self.d - 2) // 2

    @cached_property
    def multiplicity(self) -> int:
        return multiplicity(self.d, self.l)


@dataclass(frozen=True)
class ModeScattering:
    alpha: complex
    beta: complex
    s: complex
    at: CoverPoint
    mode: ModeIndex


def multiplicities(d: int, ls) -> np.ndarray:
    return np.array([multiplicity(d, int(l)) for l in np.ravel(ls)], dtype=np.int64).reshape(np.shape(ls))


# -- interior propagation ----------------------------------------------------

def _liouville(f, df, r):
    sr = np.sqrt(r)
    return sr * f, f / (2.0 * sr) + sr * df


def _hankel_basis_scaled(nu, mu, r):
    """sqrt(r) H1(mu r) e^{-i mu r}, sqrt(r) H2(mu r) e^{+i mu r} and r-derivatives (same scaling)."""
    z = mu * r
    h1 = special.hankel1e(nu, z)
    h2 = special.hankel2e(nu, z)
    d1 = special.hankel1e(nu - 1, z) - nu / z * h1
    d2 = special.hankel2e(nu - 1, z) - nu / z * h2
    f1, g1 = _liouville(h1, mu * d1, r)
    f2, g2 = _liouville(h2, mu * d2, r)
    return f1, g1, f2, g2


def _transfer_pq(nu, mu2, r_in, r_out):
    p_i, dp_i, q_i, dq_i = specfun.radial_pair(nu, mu2, r_in)
    p_o, dp_o, q_o, dq_o = specfun.radial_pair(nu, mu2, r_out)
    a_i, ap_i = _liouville(p_i, dp_i, r_in)
    b_i, bp_i = _liouville(q_i, dq_i, r_in)
    a_o, ap_o = _liouville(p_o, dp_o, r_out)
    b_o, bp_o = _liouville(q_o, dq_o, r_out)
    w = 2.0 * np.maximum(nu, 1)
    t = np.empty(np.shape(a_i) + (2, 2), dtype=complex)
    t[..., 0, 0] = (a_o * bp_i - b_o * ap_i) / w
    t[..., 0, 1] = (b_o * a_i - a_o * b_i) / w
    t[..., 1, 0] = (ap_o * bp_i - bp_o * ap_i) / w
    t[..., 1, 1] = (bp_o * a_i - ap_o * b_i) / w
    return t


def _transfer_hankel(nu, mu2, r_in, r_out):
    mu = np.sqrt(mu2)
    f1i, g1i, f2i, g2i = _hankel_basis_scaled(nu, mu, r_in)
    f1o, g1o, f2o, g2o = _hankel_basis_scaled(nu, mu, r_out)
    ep = np.exp(1j * mu * (r_out - r_in))
    em = np.exp(-1j * mu * (r_out - r_in))
    w = -4j / math.pi
    t = np.empty(np.shape(f1i) + (2, 2), dtype=complex)
    t[..., 0, 0] = (ep * f1o * g2i - em * f2o * g1i) / w
    t[..., 0, 1] = (em * f2o * f1i - ep * f1o * f2i) / w
    t[..., 1, 0] = (ep * g1o * g2i - em * g2o * g1i) / w
    t[..., 1, 1] = (em * g2o * f1i - ep * g1o * f2i) / w
    return t


def transfer_annulus(nu, mu2, r_in, r_out):
    """Matrix taking ``(v, v')`` at ``r_in`` to ``r_out`` for constant ``mu2``.

    Broadcasts over ``nu`` and ``mu2``; returns shape ``(..., 2, 2)`` with
    unit determinant.
    """
    if not 0 < r_in <= r_out:
        raise DomainError("need 0 < r_in <= r_out", r_in=r_in, r_out=r_out)
    nu, mu2 = np.broadcast_arrays(np.asarray(nu, dtype=np.int64), np.asarray(mu2, dtype=complex))
    if r_in == r_out:
        return np.broadcast_to(np.eye(2, dtype=complex), nu.shape + (2, 2)).copy()
    mu = np.sqrt(mu2)
    hank = (np.abs(mu) * r_in > 0.5 * nu + 1.0) & (np.abs(mu.imag) * r_in > 1.5)
    t = np.empty(nu.shape + (2, 2), dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        if (~hank).any():
            t[~hank] = _transfer_pq(nu[~hank], mu2[~hank], r_in, r_out)
        if hank.any():
            t[hank] = _transfer_hankel(nu[hank], mu2[hank], r_in, r_out)
    return t


def interior_data(V: StepPotential, nu, lam2):
    """Liouville data ``(v, v')`` of the regular solution at ``r = R``.

    ``lam2`` is ``lambda**2`` (single valued on the cover). Normalised so
    that ``v ~ r**(nu + 1/2)`` at the origin.
    """
    nu, lam2 = np.broadcast_arrays(np.asarray(nu, dtype=np.int64), np.asarray(lam2, dtype=complex))
    bps = V.breakpoints or (V.R,)
    vals = V.values or (0.0,)
    with np.errstate(over="ignore", invalid="ignore"):
        p, dp, _, _ = specfun.radial_pair(nu, lam2 - vals[0], bps[0], want_q=False)
        u, du = _liouville(p, dp, bps[0])
        for j in range(1, len(bps)):
            t = transfer_annulus(nu, lam2 - vals[j], bps[j - 1], bps[j])
            u, du = t[..., 0, 0] * u + t[..., 0, 1] * du, t[..., 1, 0] * u + t[..., 1, 1] * du
    return u, du


def mode_ab(V: StepPotential, ls, z, with_delta=False):
    """``(alpha, beta, scale)`` for modes ``ls`` at cover points ``z = log lambda``.

    ``ls`` and ``z`` broadcast. ``scale`` is the magnitude of the terms that
    make up ``alpha`` and is used to judge how close ``alpha`` is to zero.
    With ``with_delta`` a fourth array ``beta - alpha`` is returned, computed
    from the Wronskian against the free regular solution so that ``s - 1``
    keeps full relative accuracy when it is tiny.
    """
    ls = np.asarray(ls, dtype=np.int64)
    z = as_z(z)
    nu = ls + V.half_order
    nu, z = np.broadcast_arrays(nu, z)
    lam2 = np.exp(2.0 * z)
    u, du = interior_data(V, nu, lam2)
    R = V.R
    with np.errstate(over="ignore", invalid="ignore"):
        H1, H2, dH1, dH2 = specfun.hankel_pair_cover(nu, z.real, z.imag, R)
        h1, dh1 = _liouville(H1, dH1, R)
        h2, dh2 = _liouville(H2, dH2, R)
        c = math.pi / 4j
        alpha = c * (u * dh1 - du * h1)
        scale = (math.pi / 4) * (np.abs(u * dh1) + np.abs(du * h1))
        if V.is_zero:
            beta = alpha.copy()
            delta = np.zeros_like(alpha)
        else:
            beta = c * (h2 * du - dh2 * u)
            if with_delta:
                # h1 + h2 = 2 sqrt(r) J(lambda r) = 2 k v0 with v0 the free regular solution
                p0, dp0, _, _ = specfun.radial_pair(nu, lam2, R, want_q=False)
                v0, dv0 = _liouville(p0, dp0, R)
                k = np.exp(nu * (z - math.log(2.0)) - special.gammaln(nu + 1.0))
                delta = 2.0 * c * k * (du * v0 - u * dv0)
    if with_delta:
        return alpha, beta, scale, delta
    return alpha, beta, scale


def _check_finite(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise RangeError("overflow in mode coefficients (|lambda| R too extreme)")


def mode_coefficients(V: StepPotential, l, p: CoverPoint) -> ModeScattering:
    mode = l if isinstance(l, ModeIndex) else ModeIndex(int(l), V.d)
    alpha, beta, _ = mode_ab(V, mode.l, p.z)
    alpha, beta = complex(alpha), complex(beta)
    _check_finite(alpha, beta)
    if V.is_zero:
        s = 1 + 0j
    else:
        s = beta / alpha if alpha != 0 else complex("inf")
    return ModeScattering(alpha, beta, s, p, mode)


def mode_alpha(V: StepPotential, l, p) -> complex:
    ll = l.l if isinstance(l, ModeIndex) else int(l)
    z = p.z if isinstance(p, CoverPoint) else complex(p)
    alpha, _, _ = mode_ab(V, ll, z)
    _check_finite(alpha)
    return complex(alpha)


def mode_s(V: StepPotential, ls, z):
    """``s_l = beta / alpha`` on a broadcast grid of modes and points."""
    alpha, beta, _ = mode_ab(V, ls, z)
    if V.is_zero:
        return np.ones_like(alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        return beta / alpha


def free_alpha(V: StepPotential, ls, z):
    """``alpha`` of the zero potential with the same normalisation."""
    ls = np.asarray(ls, dtype=np.int64)
    nu = ls + V.half_order
    z = as_z(z)
    return 0.5 * np.exp(special.gammaln(nu + 1.0) + nu * (math.log(2.0) - z))


def integral_V(V: StepPotential) -> float:
    return _radial_integral(V, 1)


def integral_V2(V: StepPotential) -> float:
    return _radial_integral(V, 2)


def _radial_integral(V, power):
    d = V.d
    total = 0.0
    prev = 0.0
    for b, v in zip(V.breakpoints, V.values):
        total += v ** power * (b ** d - prev ** d) / d
        prev = b
    return sphere_volume(d) * total
