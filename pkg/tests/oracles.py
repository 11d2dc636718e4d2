"""Independent reference computations.

None of these use the package's Bessel kernels, transfer matrices or
Hankel continuation; they are built from mpmath arithmetic, generic ODE
integrators, or scipy Bessel routines combined in textbook ways.
"""
import math

import mpmath
import numpy as np
from scipy import integrate, optimize, special

EULER = mpmath.euler


def j_series(nu, w, dps=40):
    """J_nu(w) by its power series in extended precision."""
    with mpmath.workdps(dps):
        w = mpmath.mpc(w)
        half = w / 2
        term = half ** nu / mpmath.factorial(nu)
        total = term
        k = 0
        while True:
            k += 1
            term *= -half * half / (k * (k + nu))
            total += term
            if abs(term) < mpmath.mpf(10) ** (-dps + 2) * abs(total) and k > 5:
                break
        return complex(total)


def y_series(nu, w, dps=40):
    """Y_nu(w) from the log-plus-power-series representation (integer nu)."""
    with mpmath.workdps(dps):
        w = mpmath.mpc(w)
        half = w / 2
        term = half ** nu / mpmath.factorial(nu)
        k = 0
        # J part with log
        jsum = term
        psi_sum = term * (mpmath.harmonic(0) + mpmath.harmonic(nu) - 2 * EULER)
        while True:
            k += 1
            term *= -half * half / (k * (k + nu))
            jsum += term
            psi_sum += term * (mpmath.harmonic(k) + mpmath.harmonic(k + nu) - 2 * EULER)
            if abs(term) < mpmath.mpf(10) ** (-dps + 2) * (abs(jsum) + 1) and k > 5:
                break
        jv = jsum
        finite = mpmath.mpc(0)
        for k in range(nu):
            finite += mpmath.factorial(nu - k - 1) / mpmath.factorial(k) * half ** (2 * k - nu)
        y = (2 / mpmath.pi) * mpmath.log(half) * jv - finite / mpmath.pi - psi_sum / mpmath.pi
        return complex(y)


def liouville_transfer_ode(nu, mu2, r_in, r_out, dps=30):
    """Transfer matrix of v'' = ((nu^2 - 1/4)/r^2 - mu2) v by Taylor-series integration."""
    with mpmath.workdps(dps):
        mu2m = mpmath.mpc(mu2)
        c = mpmath.mpf(nu) ** 2 - mpmath.mpf(1) / 4
        cols = []
        for init in ((1, 0), (0, 1)):
            f = mpmath.odefun(lambda r, y: [y[1], (c / r ** 2 - mu2m) * y[0]],
                              mpmath.mpf(r_in), [mpmath.mpc(init[0]), mpmath.mpc(init[1])])
            v, dv = f(mpmath.mpf(r_out))
            cols.append((complex(v), complex(dv)))
        return np.array([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]])


def phase_shift(d, v, R, l, k):
    """Real-axis phase shift delta_l(k) of a single well, from J/Y matching (mpmath)."""
    nu = l + (d - 2) // 2
    K = mpmath.sqrt(mpmath.mpf(k) ** 2 - v)
    g = K * mpmath.besselj(nu, K * R, derivative=1) / mpmath.besselj(nu, K * R)
    num = k * mpmath.besselj(nu, k * R, derivative=1) - g * mpmath.besselj(nu, k * R)
    den = k * mpmath.bessely(nu, k * R, derivative=1) - g * mpmath.bessely(nu, k * R)
    return float(mpmath.atan(num / den))


# -- bound states by shooting ---------------------------------------------------

def shooting_bound_states(d, v, R, n_grid=600):
    """Bound states ``(kappa, l)`` of a single well, found by ODE shooting."""
    if v >= 0:
        return []
    out = []
    kmax = math.sqrt(-v)
    l = 0
    while True:
        nu = l + (d - 2) // 2
        if nu * nu - 0.25 > -v * R * R:
            break
        ks = np.linspace(kmax * 1e-4, kmax * (1 - 1e-9), n_grid)
        # Wronskian form avoids the poles of a log-derivative mismatch
        vals = np.array([_shoot_w(nu, v, R, kappa) for kappa in ks])
        for i in np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:])):
            root = optimize.brentq(lambda k: _shoot_w(nu, v, R, k), ks[i], ks[i + 1], xtol=1e-14)
            out.append((root, l))
        l += 1
    return sorted(out, reverse=True)


def _regular_start(nu, mu2, r0, terms=6):
    """Value and slope of r^{nu+1/2} sum_k (-mu2 r^2/4)^k / (k! (nu+1)_k) at r0."""
    val = 0.0
    der = 0.0
    a = 1.0
    for k in range(terms):
        if k:
            a *= -mu2 / 4 / (k * (nu + k))
        p = nu + 0.5 + 2 * k
        val += a * r0 ** p
        der += a * p * r0 ** (p - 1)
    return [val, der]


def _shoot_w(nu, v, R, kappa):
    c = nu * nu - 0.25
    r0 = 1e-4 * R
    E = -kappa * kappa
    y0 = _regular_start(nu, E - v, r0)
    sol = integrate.solve_ivp(lambda r, y: [y[1], (c / r ** 2 + v - E) * y[0]], (r0, R), y0,
                              method="DOP853", rtol=1e-12, atol=1e-14 * abs(y0[0]))
    u, du = sol.y[0, -1], sol.y[1, -1]
    kr = kappa * R
    kv = special.kve(nu, kr)
    dkv = -special.kve(nu - 1, kr) - nu / kr * kv         # K' = -K_{nu-1} - (nu/x) K
    # Wronskian of interior data with sqrt(r) K_nu(kappa r) (scaled, positive factor dropped)
    ext = math.sqrt(R) * kv
    dext = 0.5 / math.sqrt(R) * kv + math.sqrt(R) * kappa * dkv
    return (u * dext - du * ext) / (abs(u) + abs(du))


# -- relative heat trace in a Dirichlet ball -----------------------------------

def _bracket_roots(f, grid):
    vals = f(grid)
    idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    lo, hi = grid[idx].copy(), grid[idx + 1].copy()
    flo = vals[idx].copy()
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def _dirichlet_k(nu, v, R, Rb, kmax, step):
    """Positive-energy Dirichlet eigenvalues k (E = k^2) of one mode in the ball Rb."""

    def f(k):
        kR, kB = k * R, k * Rb
        g = special.jv(nu, kR) * special.yv(nu, kB) - special.yv(nu, kR) * special.jv(nu, kB)
        dg = k * (special.jvp(nu, kR) * special.yv(nu, kB) - special.yvp(nu, kR) * special.jv(nu, kB))
        e = k * k - v
        pos = e > 0
        K = np.sqrt(np.abs(e))
        a = np.where(pos, special.jv(nu, K * R), special.iv(nu, K * R))
        da = np.where(pos, K * special.jvp(nu, K * R), K * special.ivp(nu, K * R))
        out = da * g - a * dg
        return out / (np.abs(da * g) + np.abs(a * dg) + 1e-300)

    kmin = math.sqrt(max(0.0, v + max(0.0, nu * nu - 0.25) / Rb ** 2)) + 1e-9
    grid = np.arange(kmin, kmax + step, step)
    return _bracket_roots(f, grid)


def _dirichlet_kappa(nu, v, R, Rb, step):
    """Negative-energy eigenvalues kappa (E = -kappa^2) in the ball."""
    if v >= 0 or nu * nu - 0.25 > -v * R * R:
        return np.array([])

    def f(kap):
        kR, kB = kap * R, kap * Rb
        g = special.iv(nu, kR) * special.kv(nu, kB) - special.kv(nu, kR) * special.iv(nu, kB)
        dg = kap * (special.ivp(nu, kR) * special.kv(nu, kB) - special.kvp(nu, kR) * special.iv(nu, kB))
        K = np.sqrt(-v - kap * kap)
        a = special.jv(nu, K * R)
        da = K * special.jvp(nu, K * R)
        return (da * g - a * dg) / (np.abs(da * g) + np.abs(a * dg) + 1e-300)

    grid = np.arange(1e-6, math.sqrt(-v) - 1e-9, step)
    return _bracket_roots(f, grid)


def box_heat_trace(d, v, R, t, Rb=1.6, k_cut=None, step=0.01):
    """tr(exp(-tH) - exp(-tH0)) for a single well in a Dirichlet ball of radius Rb.

    Each angular mode is treated exactly: eigenvalues are roots of the
    matching determinant, free eigenvalues are Bessel zeros. The ball
    boundary is far from the support on the heat-kernel length sqrt(t),
    so the result equals the whole-space relative trace up to terms of
    order exp(-(Rb - R)^2 / t).
    """
    if k_cut is None:
        k_cut = math.sqrt(45.0 / t)
    total = 0.0
    l = 0
    half = (d - 2) // 2
    while True:
        nu = l + half
        m = math.comb(l + d - 1, d - 1) - (math.comb(l + d - 3, d - 1) if l >= 2 else 0)
        kv_ = _dirichlet_k(nu, v, R, Rb, k_cut, step)
        k0 = _dirichlet_k(nu, 0.0, R, Rb, k_cut, step)
        kap = _dirichlet_kappa(nu, v, R, Rb, step)
        contrib = (np.exp(-t * kv_ ** 2).sum() + np.exp(t * kap ** 2).sum()
                   - np.exp(-t * k0 ** 2).sum())
        total += m * contrib
        if nu > k_cut * Rb:
            break
        l += 1
    return total


# -- dense argument-principle scan for resonances ---------------------------------

def matching_function(d, v, R, l, lam):
    """Interior/outgoing mismatch ``J(KR) lam H1'(lam R) - K J'(KR) H1(lam R)``, divided by K^nu.

    Principal branch of lambda (``-pi < arg lambda <= pi``); zeros are the
    points where the regular interior solution continues as a purely
    outgoing wave, i.e. the resonances of a single well.
    """
    nu = l + (d - 2) // 2
    lam = np.asarray(lam, dtype=complex)
    K = np.sqrt(lam * lam - v)
    kr = K * R
    jn = special.jv(nu, kr) / K ** nu
    djn = K * special.jvp(nu, kr) / K ** nu
    h = special.hankel1(nu, lam * R)
    dh = lam * special.h1vp(nu, lam * R)
    return jn * dh - djn * h


def dense_zero_count(d, v, R, l, x0, x1, y0, y1, n_edge=20000):
    """Zeros of matching_function inside the z-box, by phase unwrapping on a fixed dense grid."""
    xs = np.linspace(x0, x1, n_edge)
    ys = np.linspace(y0, y1, n_edge)
    path = np.concatenate([xs + 1j * y0, x1 + 1j * ys[1:], xs[::-1][1:] + 1j * y1,
                           x0 + 1j * ys[::-1][1:]])
    f = matching_function(d, v, R, l, np.exp(path))
    dphi = np.angle(f[1:] / f[:-1])
    if np.max(np.abs(dphi)) > 1.0:
        raise RuntimeError("dense scan under-resolved")
    return int(round(dphi.sum() / (2 * math.pi)))
