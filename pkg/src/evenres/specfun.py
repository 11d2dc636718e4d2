"""Integer-order Bessel and Hankel functions, including continuation to any
sheet of the logarithmic cover.

Principal-branch values come from scipy's AMOS wrappers. Continuation by
``m`` half-turns uses the exact connection formulas (integer ``nu``)::

    H1(w e^{i m pi}) = (-1)^{m nu} [(1 - m) H1(w) - m H2(w)]
    H2(w e^{i m pi}) = (-1)^{m nu} [m H1(w) + (1 + m) H2(w)]

applied once, linearly in ``m``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from . import _flags, kernels
from .cover import CoverPoint, half_turn_reduction
from .errors import DomainError, RangeError

# |Im w| beyond which exp(|Im w|) overflows a double
_IM_LIMIT = 700.0


def _check_order(nu):
    nu_arr = np.asarray(nu)
    if not np.issubdtype(nu_arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(nu_arr, 1), 0)):
            raise DomainError("Bessel order must be a nonnegative integer", nu=nu)
    if np.any(nu_arr < 0):
        raise DomainError("Bessel order must be a nonnegative integer", nu=nu)
    return nu_arr.astype(np.int64)


def _check_range(w):
    im = np.max(np.abs(np.imag(w))) if np.size(w) else 0.0
    if im > _IM_LIMIT:
        raise RangeError("|Im w| too large for double precision", bound=_IM_LIMIT, value=float(im))


def _scalar_or_array(v):
    return v.item() if isinstance(v, np.ndarray) and v.ndim == 0 else v


def bessel_j(nu, w):
    """J_nu(w), principal branch (entire)."""
    nu = _check_order(nu)
    w = np.asarray(w, dtype=complex)
    _check_range(w)
    if _flags.extended_precision():
        with np.errstate(invalid="ignore"):  # mpmath start-up leaves the FPU flag set
            out = np.vectorize(lambda n, z: complex(_mp().besselj(int(n), z)),
                               otypes=[complex])(nu, w)
    else:
        out = special.jv(nu, w)
    return _scalar_or_array(out)


def bessel_y(nu, w):
    """Y_nu(w) for ``|arg w| < pi``; zero and the negative real axis are excluded."""
    nu = _check_order(nu)
    w = np.asarray(w, dtype=complex)
    on_cut = (w.imag == 0) & (w.real <= 0)
    if np.any(on_cut):
        raise DomainError("Y_nu is undefined at 0 and on the negative real axis",
                          w=[complex(v) for v in np.atleast_1d(w[on_cut])][:4])
    _check_range(w)
    if _flags.extended_precision():
        with np.errstate(invalid="ignore"):
            out = np.vectorize(lambda n, z: complex(_mp().bessely(int(n), z)),
                               otypes=[complex])(nu, w)
    else:
        out = special.yv(nu, w)
    return _scalar_or_array(out)


def _mp():
    import mpmath

    mpmath.mp.dps = 30
    return mpmath


def _principal_hankels(nu, w0):
    """H1, H2 and their derivatives at principal-branch arguments."""
    if _flags.extended_precision():
        mp = _mp()

        def one(n, z):
            n = int(n)
            h1 = mp.hankel1(n, z)
            h2 = mp.hankel2(n, z)
            d1 = (mp.hankel1(n - 1, z) - mp.hankel1(n + 1, z)) / 2
            d2 = (mp.hankel2(n - 1, z) - mp.hankel2(n + 1, z)) / 2
            return complex(h1), complex(h2), complex(d1), complex(d2)

        f = np.vectorize(one, otypes=[complex] * 4)
        with np.errstate(invalid="ignore"):
            return f(nu, w0)
    h1 = special.hankel1(nu, w0)
    h2 = special.hankel2(nu, w0)
    h1m = special.hankel1(nu - 1, w0)
    h2m = special.hankel2(nu - 1, w0)
    d1 = h1m - nu / w0 * h1
    d2 = h2m - nu / w0 * h2
    return h1, h2, d1, d2


def hankel_pair_cover(nu, x, y, r):
    """Continued Hankel pair and r-derivatives of ``H(lambda r)``.

    ``lambda = exp(x + i y)`` on the cover, ``r > 0``. All inputs broadcast.
    Returns ``(H1, H2, dH1/dr, dH2/dr)``.
    """
    nu = np.asarray(nu, dtype=np.int64)
    y0, m = half_turn_reduction(y)
    lam0 = np.exp(np.asarray(x, dtype=float) + 1j * y0)
    w0 = lam0 * r
    _check_range(w0)
    h1, h2, d1, d2 = _principal_hankels(nu, w0)
    eps = np.where((m * nu) % 2 == 0, 1.0, -1.0)
    H1 = eps * ((1 - m) * h1 - m * h2)
    H2 = eps * (m * h1 + (1 + m) * h2)
    dH1 = eps * lam0 * ((1 - m) * d1 - m * d2)
    dH2 = eps * lam0 * (m * d1 + (1 + m) * d2)
    return H1, H2, dH1, dH2


def hankel_on_cover(kind, nu, p, r):
    """Analytic continuation of ``H^{(kind)}_nu(lambda r)`` to the sheet of ``p``.

    ``p`` is a CoverPoint (or array of complex ``z = log lambda``), ``r > 0``.
    """
    if kind not in (1, 2):
        raise DomainError("kind must be 1 or 2", kind=kind)
    if np.any(np.asarray(r) <= 0):
        raise DomainError("r must be positive", r=r)
    nu = _check_order(nu)
    if isinstance(p, CoverPoint):
        x, y = p.x, p.y
    else:
        z = np.asarray(p, dtype=complex)
        x, y = z.real, z.imag
    H1, H2, _, _ = hankel_pair_cover(nu, x, y, r)
    out = H1 if kind == 1 else H2
    if not np.all(np.isfinite(out)):
        raise RangeError("Hankel function overflow", nu=np.asarray(nu).tolist(), r=r)
    return _scalar_or_array(out)


# -- entire radial solutions ------------------------------------------------

def _series_region(nu, x):
    return np.abs(x) <= np.maximum(4.0, nu + 1.0)


def _pq_scipy(nu, mu2, r, want_q=True):
    """p, p', q, q' from scipy Bessel values with logarithmic prefactors."""
    mu = np.sqrt(mu2)
    z = mu * r
    scale = np.abs(z.imag)
    lgn = special.gammaln(nu + 1.0)
    je = special.jve(nu, z)
    jme = special.jve(nu - 1, z)
    jpe = jme - nu / z * je                      # J'(z) e^{-|Im z|}
    lp = lgn + nu * np.log(2.0 / mu) + scale
    pref = np.exp(lp)
    p = pref * je
    dp = pref * mu * jpe
    if not want_q:
        return p, dp, None, None
    ye = special.yve(nu, z)
    yme = special.yve(nu - 1, z)
    ype = yme - nu / z * ye
    lmu = np.log(mu / 2.0)
    lgm = np.where(nu >= 1, special.gammaln(np.maximum(nu, 1).astype(float)), 0.0)
    qpref = np.exp(nu * lmu + math.log(math.pi) - lgm + scale)
    c = 2.0 * lmu * np.exp(2.0 * nu * lmu - lgn - lgm)
    q = qpref * ye - c * p
    dq = qpref * mu * ype - c * dp
    return p, dp, q, dq


def radial_pair(nu, mu2, r, want_q=True):
    """Entire solutions ``p`` (regular, ``~ r**nu``) and ``q`` with derivatives.

    Returns ``(p, dp/dr, q, dq/dr)``; ``q`` entries are None when
    ``want_q`` is false. Wronskian ``p q' - p' q = 2 max(nu, 1) / r``.
    """
    nu, mu2, r = np.broadcast_arrays(np.asarray(nu, dtype=np.int64),
                                     np.asarray(mu2, dtype=complex),
                                     np.asarray(r, dtype=float))
    x = mu2 * r * r / 4.0
    ser = _series_region(nu, x)
    p = np.empty(nu.shape, dtype=complex)
    dp = np.empty_like(p)
    q = np.empty_like(p) if want_q else None
    dq = np.empty_like(p) if want_q else None
    if ser.any():
        pv, pd = kernels.regular_series(nu[ser], x[ser], r[ser])
        p[ser] = pv
        dp[ser] = pd / r[ser]
        if want_q:
            qv, qd = kernels.second_series(nu[ser], x[ser], r[ser])
            q[ser] = qv
            dq[ser] = qd / r[ser]
    far = ~ser
    if far.any():
        _check_range(np.sqrt(mu2[far]) * r[far])
        with np.errstate(over="ignore", invalid="ignore"):
            pv, pd, qv, qd = _pq_scipy(nu[far], mu2[far], r[far], want_q)
        p[far] = pv
        dp[far] = pd
        if want_q:
            q[far] = qv
            dq[far] = qd
    return p, dp, q, dq


def regular_radial(nu, mu2, r):
    """Regular solution ``w ~ r**nu`` of the radial Bessel equation and ``w'``.

    ``w(r) = nu! (2/mu)**nu J_nu(mu r)``; it depends on ``mu2`` only.
    """
    nu = _check_order(nu)
    if np.any(np.asarray(r) <= 0):
        raise DomainError("r must be positive", r=r)
    p, dp, _, _ = radial_pair(nu, mu2, r, want_q=False)
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(dp))):
        raise RangeError("regular solution overflow", nu=np.asarray(nu).tolist())
    return _scalar_or_array(p), _scalar_or_array(dp)


def wronskian_jy(nu, w):
    """``J_nu(w) Y_nu'(w) - J_nu'(w) Y_nu(w)`` from principal-branch values."""
    nu = np.asarray(nu, dtype=np.int64)
    w = np.asarray(w, dtype=complex)
    j = special.jv(nu, w)
    y = special.yv(nu, w)
    dj = special.jvp(nu, w)
    dy = special.yvp(nu, w)
    return j * dy - dj * y


# -- shipped reference table -------------------------------------------------

def reference_table():
    """Records ``(function, nu, x, y, r, expected, rel_tol)`` of the bundled fixture."""
    from importlib import resources

    text = resources.files("evenres").joinpath("data/specfun_reference.csv").read_text()
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        f, nu, x, y, r, re, im, tol = line.split(",")
        rows.append((f, int(nu), float(x), float(y), float(r), complex(float(re), float(im)),
                     float(tol)))
    return rows


def _evaluate_record(f, nu, x, y, r):
    if f in ("J", "Y"):
        w = np.exp(x + 1j * y) * r
        return complex(bessel_j(nu, w) if f == "J" else bessel_y(nu, w))
    if f in ("H1", "H2"):
        return complex(hankel_on_cover(1 if f == "H1" else 2, nu, CoverPoint(x, y), r))
    if f == "W":
        # fixture stores J_nu(mu r)/mu^nu; regular_radial carries an extra 2^nu nu!
        w, _ = regular_radial(nu, np.exp(2 * (x + 1j * y)), r)
        return complex(w) / (2.0 ** nu * math.factorial(nu))
    raise DomainError("unknown function in reference table", function=f)


def self_test():
    """Evaluate every fixture record; returns a list of ``(record, rel_error, ok)``."""
    out = []
    for rec in reference_table():
        f, nu, x, y, r, expected, tol = rec
        got = _evaluate_record(f, nu, x, y, r)
        err = abs(got - expected) / abs(expected)
        out.append((rec, err, err <= tol))
    return out
