"""Series kernels for the radial Bessel equation, entire in mu^2.

For integer order ``nu`` and ``x = mu2 * r**2 / 4`` two solutions of
``w'' + w'/r + (mu2 - nu**2/r**2) w = 0`` are summed directly:

* ``p(r) = r**nu * sum_k (-x)**k nu! / (k! (nu+k)!)``, i.e.
  ``nu! (2/mu)**nu J_nu(mu r)``, normalised so that ``p ~ r**nu``;
* ``q(r)``, the log-augmented second solution ``pi (mu/2)**nu Y_nu(mu r)``
  with the multiple of ``p`` carrying ``log(mu)`` removed and divided by
  ``(nu-1)!`` (for ``nu >= 1``), so ``q ~ -r**-nu``; for ``nu = 0`` it is
  ``2 log r + 2 gamma`` at ``mu2 = 0``.

Neither depends on the branch of ``mu``. Their Wronskian is ``2 max(nu, 1) / r``.
Each kernel returns ``(value, r * derivative)``.

Both a numba implementation and a numpy implementation are provided; the
module-level ``regular_series`` / ``second_series`` point at numba unless
``EVENRES_DISABLE_NUMBA`` is set (or numba is unavailable).
"""
import math

import numpy as np

from . import _flags

_EULER = 0.57721566490153286061
_KMAX = 2000
_RTOL = 1e-17


def _regular_scalar(nu, x, r):
    a = 1.0 + 0.0j
    s = a
    sk = 0.0j
    k = 0
    while k < _KMAX:
        k += 1
        a = a * (-x) / (k * (nu + k))
        s += a
        sk += k * a
        if abs(a) * (k + 1) <= _RTOL * abs(s) or a == 0:
            break
    rn = r ** nu
    return rn * s, rn * (nu * s + 2.0 * sk)


def _second_scalar(nu, x, r):
    lr = math.log(r)
    # polynomial part, nu >= 1 only
    b = 1.0 + 0.0j
    bsum = 0.0j
    bk = 0.0j
    if nu >= 1:
        bsum = b
        for k in range(1, nu):
            b = b * x / (k * (nu - k))
            bsum += b
            bk += k * b
    # F = x**nu / (nu! (nu-1)!), F = 1 for nu = 0
    f = 1.0 + 0.0j
    for j in range(1, nu + 1):
        f = f * x / j
        if j < nu:
            f = f / j
    # psi(k+1) + psi(nu+k+1) weighted copy of the regular series
    h1 = 0.0
    h2 = 0.0
    for j in range(1, nu + 1):
        h2 += 1.0 / j
    psi = (h1 - _EULER) + (h2 - _EULER)
    a = 1.0 + 0.0j
    asum = a
    ak = 0.0j
    dsum = a * psi
    dk = 0.0j
    k = 0
    while k < _KMAX:
        k += 1
        a = a * (-x) / (k * (nu + k))
        h1 += 1.0 / k
        h2 += 1.0 / (nu + k)
        psi = (h1 - _EULER) + (h2 - _EULER)
        asum += a
        ak += k * a
        dsum += a * psi
        dk += k * a * psi
        if (abs(a) * (k + 1) * (1.0 + abs(psi)) <= _RTOL * (abs(asum) + abs(dsum))) or a == 0:
            break
    core = -bsum + f * (2.0 * lr * asum - dsum)
    rinv = r ** (-nu)
    val = rinv * core
    rder = rinv * (-nu * core - 2.0 * bk + 2.0 * nu * f * (2.0 * lr * asum - dsum)
                   + f * (2.0 * asum + 4.0 * lr * ak - 2.0 * dk))
    return val, rder


def _regular_loop(nu, x, r):
    n = nu.shape[0]
    val = np.empty(n, dtype=np.complex128)
    der = np.empty(n, dtype=np.complex128)
    for i in range(n):
        v, d = _regular_scalar(nu[i], x[i], r[i])
        val[i] = v
        der[i] = d
    return val, der


def _second_loop(nu, x, r):
    n = nu.shape[0]
    val = np.empty(n, dtype=np.complex128)
    der = np.empty(n, dtype=np.complex128)
    for i in range(n):
        v, d = _second_scalar(nu[i], x[i], r[i])
        val[i] = v
        der[i] = d
    return val, der


# -- numpy implementation -------------------------------------------------

def regular_series_numpy(nu, x, r):
    nu = np.asarray(nu, dtype=np.int64)
    x = np.asarray(x, dtype=np.complex128)
    r = np.asarray(r, dtype=np.float64)
    a = np.ones_like(x)
    s = a.copy()
    sk = np.zeros_like(x)
    active = np.ones(x.shape, dtype=bool)
    k = 0
    while active.any() and k < _KMAX:
        k += 1
        a = np.where(active, a * (-x) / (k * (nu + k)), 0)
        s += a
        sk += k * a
        active &= ~((np.abs(a) * (k + 1) <= _RTOL * np.abs(s)) | (a == 0))
    rn = r ** nu
    return rn * s, rn * (nu * s + 2.0 * sk)


def second_series_numpy(nu, x, r):
    nu = np.asarray(nu, dtype=np.int64)
    x = np.asarray(x, dtype=np.complex128)
    r = np.asarray(r, dtype=np.float64)
    lr = np.log(r)
    numax = int(nu.max()) if nu.size else 0
    b = np.ones_like(x)
    bsum = np.where(nu >= 1, 1.0 + 0j, 0j)
    bk = np.zeros_like(x)
    f = np.ones_like(x)
    h2 = np.zeros(x.shape)
    for j in range(1, numax + 1):
        on = nu >= j
        f = np.where(on, f * x / j, f)
        f = np.where(nu > j, f / j, f)
        h2 = np.where(on, h2 + 1.0 / j, h2)
        if j < numax:
            onb = nu > j  # k = j < nu
            b = np.where(onb, b * x / (j * np.maximum(nu - j, 1)), b)
            bsum = np.where(onb, bsum + b, bsum)
            bk = np.where(onb, bk + j * b, bk)
    h1 = np.zeros(x.shape)
    psi = (h1 - _EULER) + (h2 - _EULER)
    a = np.ones_like(x)
    asum = a.copy()
    ak = np.zeros_like(x)
    dsum = a * psi
    dk = np.zeros_like(x)
    active = np.ones(x.shape, dtype=bool)
    k = 0
    while active.any() and k < _KMAX:
        k += 1
        a = np.where(active, a * (-x) / (k * (nu + k)), 0)
        h1 = h1 + 1.0 / k
        h2 = h2 + 1.0 / (nu + k)
        psi = (h1 - _EULER) + (h2 - _EULER)
        asum += a
        ak += k * a
        dsum += a * psi
        dk += k * a * psi
        small = np.abs(a) * (k + 1) * (1.0 + np.abs(psi)) <= _RTOL * (np.abs(asum) + np.abs(dsum))
        active &= ~(small | (a == 0))
    core = -bsum + f * (2.0 * lr * asum - dsum)
    rinv = r ** (-nu.astype(float))
    val = rinv * core
    rder = rinv * (-nu * core - 2.0 * bk + 2.0 * nu * f * (2.0 * lr * asum - dsum)
                   + f * (2.0 * asum + 4.0 * lr * ak - 2.0 * dk))
    return val, rder


# -- numba implementation -------------------------------------------------

try:
    import numba

    _regular_scalar_nb = numba.njit(cache=True)(_regular_scalar)
    _second_scalar_nb = numba.njit(cache=True)(_second_scalar)

    @numba.njit(cache=True)
    def _regular_loop_nb(nu, x, r):
        n = nu.shape[0]
        val = np.empty(n, dtype=np.complex128)
        der = np.empty(n, dtype=np.complex128)
        for i in range(n):
            v, d = _regular_scalar_nb(nu[i], x[i], r[i])
            val[i] = v
            der[i] = d
        return val, der

    @numba.njit(cache=True)
    def _second_loop_nb(nu, x, r):
        n = nu.shape[0]
        val = np.empty(n, dtype=np.complex128)
        der = np.empty(n, dtype=np.complex128)
        for i in range(n):
            v, d = _second_scalar_nb(nu[i], x[i], r[i])
            val[i] = v
            der[i] = d
        return val, der

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def _flat_call(loop, nu, x, r):
    nu, x, r = np.broadcast_arrays(np.asarray(nu, dtype=np.int64),
                                   np.asarray(x, dtype=np.complex128),
                                   np.asarray(r, dtype=np.float64))
    shape = nu.shape
    val, der = loop(np.ascontiguousarray(nu).ravel(), np.ascontiguousarray(x).ravel(),
                    np.ascontiguousarray(r).ravel())
    return val.reshape(shape), der.reshape(shape)


def regular_series_numba(nu, x, r):
    return _flat_call(_regular_loop_nb, nu, x, r)


def second_series_numba(nu, x, r):
    return _flat_call(_second_loop_nb, nu, x, r)


def regular_series_python(nu, x, r):
    """Reference scalar loop without JIT (slow; used by tests only)."""
    return _flat_call(_regular_loop, nu, x, r)


def second_series_python(nu, x, r):
    return _flat_call(_second_loop, nu, x, r)


if HAVE_NUMBA and not _flags.DISABLE_NUMBA:
    regular_series = regular_series_numba
    second_series = second_series_numba
    BACKEND = "numba"
else:
    regular_series = regular_series_numpy
    second_series = second_series_numpy
    BACKEND = "numpy"
