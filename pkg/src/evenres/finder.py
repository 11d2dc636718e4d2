"""Resonances, eigenvalues and counting functions.

Every mode function ``alpha_l`` is analytic in ``z = log lambda``, so all
root finding happens in rectangles of the z-plane: zeros are counted by the
argument principle, isolated by quadrisection and polished by Newton's
method with a contour-integral derivative.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import _contour
from .cover import CoverPoint
from .errors import BoxError, ContourError, DomainError, RangeError, TruncationError
from .radial import ModeIndex, StepPotential, free_alpha, mode_ab, multiplicity

MERGE_DISTANCE = 1e-8


@dataclass(frozen=True)
class Resonance:
    z: CoverPoint
    mode: ModeIndex
    order: int
    mu_contribution: int
    residual: float
    polished: bool = True
    box: tuple = ()

    @property
    def flagged(self) -> bool:
        """Zeros of order >= 2 need manual analysis of the rank convention."""
        return self.order >= 2

    def to_dict(self):
        out = self.z.to_dict()
        out.update(mode_l=self.mode.l, order=self.order, mu_contribution=self.mu_contribution,
                   residual=self.residual, polished=self.polished)
        if self.box:
            out["box"] = list(self.box)
        return out


@dataclass(frozen=True)
class SearchWindow:
    x_range: tuple
    y_range: tuple
    modes: tuple | None = None
    polish_tol: float = 1e-10
    min_box: float = 1e-6
    rouche_margin: float = 0.5
    l_max: int = 400
    seed: int = 0

    def __post_init__(self):
        for name in ("x_range", "y_range"):
            rng = tuple(float(v) for v in getattr(self, name))
            if len(rng) != 2 or not all(math.isfinite(v) for v in rng) or not rng[0] < rng[1]:
                raise DomainError(f"{name} must be a finite non-empty interval", field=name, value=rng)
            object.__setattr__(self, name, rng)
        if self.modes is not None:
            modes = tuple(int(l) for l in self.modes)
            if any(l < 0 for l in modes):
                raise DomainError("modes must be nonnegative", field="modes", value=modes)
            object.__setattr__(self, "modes", modes)
        if not self.polish_tol > 0:
            raise DomainError("polish tolerance must be positive", field="polish_tol")

    @classmethod
    def from_modulus_arg(cls, lam_min, lam_max, arg_min, arg_max, **kw):
        return cls((math.log(lam_min), math.log(lam_max)), (arg_min, arg_max), **kw)

    def contains(self, z: complex) -> bool:
        return (self.x_range[0] <= z.real <= self.x_range[1]
                and self.y_range[0] <= z.imag <= self.y_range[1])


# -- argument principle --------------------------------------------------------

def _alpha_fn(V, l):
    def f(zs):
        a, _, _ = mode_ab(V, l, zs)
        return np.atleast_2d(a)
    return f


def _rate(V, l, x_max):
    """Bound on |d log alpha_l / dz| used to seed the boundary sampling."""
    return math.exp(x_max) * V.R + l + V.half_order + 2.0


def _box_winding(V, l, bx):
    path, starts = _contour.box(*bx)
    n0 = _contour.samples_for(2 * (bx[1] - bx[0] + bx[3] - bx[2]), _rate(V, l, bx[1]))
    w, _ = _contour.winding(_alpha_fn(V, l), path, n0=n0, breaks=starts)
    return int(_contour.integer_winding(w)[0])


def count_zeros(V: StepPotential, l, box, seed=0, attempts=3) -> int:
    """Zeros of ``alpha_l`` inside ``box = (x0, x1, y0, y1)`` (z-plane).

    A boundary passing too close to a zero is moved outward by a small
    seeded perturbation, at most ``attempts`` times.
    """
    l = l.l if isinstance(l, ModeIndex) else int(l)
    x0, x1, y0, y1 = map(float, box)
    if not (x0 < x1 and y0 < y1):
        raise DomainError("empty box", box=box)
    if V.is_zero:
        return 0
    rng = np.random.default_rng(seed)
    bx = (x0, x1, y0, y1)
    for _ in range(attempts + 1):
        try:
            return _box_winding(V, l, bx)
        except ContourError:
            eps = 1e-3 * min(x1 - x0, y1 - y0)
            jit = rng.uniform(0.2, 1.0, 4) * eps
            bx = (bx[0] - jit[0], bx[1] + jit[1], bx[2] - jit[2], bx[3] + jit[3])
    raise BoxError("zero on the box boundary after perturbation", l=l, box=list(box))


def _deriv(f, z, h, n=8):
    th = 2 * math.pi * np.arange(n) / n
    vals = f(z + h * np.exp(1j * th))
    return complex((vals * np.exp(-1j * th)).mean() / h)


def _newton(V, l, z0, bx, tol, maxit=60):
    def f(zs):
        a, _, _ = mode_ab(V, l, np.asarray(zs))
        return a

    z = complex(z0)
    size = min(bx[1] - bx[0], bx[3] - bx[2])
    h = min(1e-4, size / 8)
    for _ in range(maxit):
        a = complex(f(z))
        da = _deriv(f, z, h)
        if da == 0 or not math.isfinite(abs(da)):
            break
        step = a / da
        if abs(step) > size:
            step *= size / abs(step)
        z -= step
        if not _inside(z, bx, pad=0.5 * size):
            break
        h = min(h, max(1e-7, 10 * abs(step)))
        if abs(step) < 1e-14 * (1 + abs(z)):
            break
    a, _, scale = mode_ab(V, l, z)
    return z, float(abs(a) / scale)


def _order_at(V, l, z, radius):
    f = _alpha_fn(V, l)
    for _ in range(4):
        try:
            w, _ = _contour.winding(f, _contour.circle(z, radius))
            return int(_contour.integer_winding(w)[0])
        except ContourError:
            radius *= 0.5
    raise ContourError("order of zero unresolved", z=complex(z), l=l)


def _inside(z, bx, pad=0.0):
    return bx[0] - pad <= z.real <= bx[1] + pad and bx[2] - pad <= z.imag <= bx[3] + pad


def _split(bx, rng):
    fx, fy = rng.uniform(0.42, 0.58, 2)
    xm = bx[0] + fx * (bx[1] - bx[0])
    ym = bx[2] + fy * (bx[3] - bx[2])
    return [(bx[0], xm, bx[2], ym), (xm, bx[1], bx[2], ym),
            (bx[0], xm, ym, bx[3]), (xm, bx[1], ym, bx[3])]


def _mode_zeros(V, l, bx, window, rng):
    """Isolate and polish the zeros of alpha_l in ``bx``."""
    n_top = count_zeros(V, l, bx, seed=int(rng.integers(1 << 30)))
    out = []
    stack = [(bx, n_top)]
    while stack:
        b, n = stack.pop()
        if n == 0:
            continue
        size = min(b[1] - b[0], b[3] - b[2])
        if n == 1 or size < window.min_box:
            centre = complex((b[0] + b[1]) / 2, (b[2] + b[3]) / 2)
            try:
                z, res = _newton(V, l, centre, b, window.polish_tol)
            except RangeError:
                z, res = centre, math.inf
            # the pad covers the outward boundary perturbation of count_zeros;
            # a wider one would let Newton land on a neighbouring box's zero
            if res < window.polish_tol and _inside(z, b, pad=2e-3 * size):
                rad = min(1e-3, 0.2 * size) if n == 1 else 0.5 * size
                order = _order_at(V, l, z, max(rad, 1e-9))
                out.append((z, order, res, True, b))
                continue
            if size >= window.min_box:
                children = _split(b, rng)
                counts = [count_zeros(V, l, c, seed=int(rng.integers(1 << 30))) for c in children]
                stack.extend((c, k) for c, k in zip(children, counts) if k)
                continue
            out.append((centre, n, res, False, b))
            continue
        children = _split(b, rng)
        counts = [count_zeros(V, l, c, seed=int(rng.integers(1 << 30))) for c in children]
        if sum(counts) != n:
            raise ContourError("zero counts of sub-boxes do not add up", l=l, box=list(b),
                               parent=n, children=counts)
        stack.extend((c, k) for c, k in zip(children, counts) if k)
    total = sum(o[1] for o in out)
    distinct = {(round(o[0].real / MERGE_DISTANCE), round(o[0].imag / MERGE_DISTANCE)) for o in out}
    if total != n_top or len(distinct) != len(out):
        raise ContourError("isolated zeros do not match the box count", l=l, box=list(bx),
                           count=n_top, found=total)
    return out


def rouche_deviation(V, l, window, npts=256):
    """max |alpha_l / alpha_free - 1| on the window boundary (dense samples)."""
    path, starts = _contour.box(window.x_range[0], window.x_range[1],
                                window.y_range[0], window.y_range[1])
    t = np.union1d(np.linspace(0, 1, npts, endpoint=False), starts)
    zs = path(t)
    a, _, _ = mode_ab(V, l, zs)
    return float(np.max(np.abs(a / free_alpha(V, l, zs) - 1.0)))


def _mode_results(V, l, window):
    rng = np.random.default_rng([window.seed, l])
    bx = (window.x_range[0], window.x_range[1], window.y_range[0], window.y_range[1])
    mode = ModeIndex(l, V.d)
    res = []
    for z, order, r, ok, b in _mode_zeros(V, l, bx, window, rng):
        if not window.contains(z):
            continue
        res.append(Resonance(CoverPoint.from_z(z), mode, order, order * mode.multiplicity,
                             r, ok, tuple(b) if not ok else ()))
    return res


def _merge(res):
    res = sorted(res, key=lambda r: (r.mode.l, r.z.x, r.z.y))
    kept = []
    for r in res:
        dup = [k for k in kept if k.mode == r.mode and abs(k.z.z - r.z.z) < MERGE_DISTANCE]
        if dup:
            if r.residual < dup[0].residual:
                kept[kept.index(dup[0])] = r
            continue
        kept.append(r)
    return sorted(kept, key=lambda r: (r.z.x, r.z.y, r.mode.l))


def find_resonances(V: StepPotential, window: SearchWindow, workers=1):
    """All zeros of the mode functions ``alpha_l`` inside ``window``.

    Without an explicit mode list, modes are swept upward until three
    consecutive modes are certified zero-free by Rouche's theorem against
    the free coefficient.
    """
    if V.is_zero:
        return []
    results = []
    if window.modes is not None:
        ls = list(window.modes)
        if workers > 1:
            with ThreadPoolExecutor(workers) as ex:
                for r in ex.map(lambda l: _mode_results(V, l, window), ls):
                    results.extend(r)
        else:
            for l in ls:
                results.extend(_mode_results(V, l, window))
        return _merge(results)
    quiet = 0
    l = 0
    while quiet < 3:
        if l > window.l_max:
            raise TruncationError("mode sweep did not terminate", l_max=window.l_max)
        found = _mode_results(V, l, window)
        results.extend(found)
        if not found and rouche_deviation(V, l, window) < window.rouche_margin:
            quiet += 1
        else:
            quiet = 0
        l += 1
    return _merge(results)


def resolvent_multiplicity(V: StepPotential, p, radius=1e-4, l_max=None) -> int:
    """``sum_l order_l(p) m_l`` over the modes whose alpha_l vanishes at ``p``."""
    if not isinstance(p, CoverPoint):
        p = CoverPoint.from_z(p)
    if V.is_zero:
        return 0
    if l_max is None:
        l_max = _mode_bound(V, p, radius)
    total = 0
    ls = np.arange(l_max + 1)
    f = lambda zs: mode_ab(V, ls[:, None], zs[None, :])[0]
    for _ in range(4):
        try:
            w, _ = _contour.winding(f, _contour.circle(p.z, radius))
            w = _contour.integer_winding(w)
            break
        except ContourError:
            radius *= 0.6
    else:
        raise ContourError("multiplicity winding unresolved", z=p.z)
    for l, k in zip(ls, w):
        total += int(k) * multiplicity(V.d, int(l))
    return total


def _mode_bound(V, p, radius):
    """A mode index beyond which alpha_l has no zero near ``p``."""
    win = SearchWindow((p.x - 4 * radius, p.x + 4 * radius), (p.y - 4 * radius, p.y + 4 * radius))
    l = 0
    quiet = 0
    while quiet < 3:
        quiet = quiet + 1 if rouche_deviation(V, l, win, npts=64) < 0.5 else 0
        l += 1
        if l > 2000:
            raise TruncationError("mode bound not found", z=p.z)
    return l


# -- eigenvalues ----------------------------------------------------------------

def _bound_mode_limit(V):
    depth = max([-v for v in V.values] + [0.0])
    if depth == 0:
        return -1
    # no bound state once (nu^2 - 1/4)/R^2 exceeds the well depth
    nu = math.ceil(math.sqrt(depth * V.R ** 2 + 0.25))
    return max(nu - V.half_order, 0)


def find_eigenvalues(V: StepPotential, ngrid=800):
    """Negative eigenvalues ``-kappa**2`` as ``[(kappa, multiplicity), ...]``, descending in kappa."""
    lmax = _bound_mode_limit(V)
    if lmax < 0 or V.is_zero:
        return []
    kmax = math.sqrt(max(-v for v in V.values))
    kappas = kmax * np.geomspace(1e-6, 1.0, ngrid)
    found = []
    for l in range(lmax + 1):
        zs = np.log(kappas) + 1j * math.pi / 2
        a, _, _ = mode_ab(V, l, zs)
        rot = np.exp(-1j * np.angle(a[np.argmax(np.abs(a))]))
        g = (a * rot).real

        def fk(k, rot=rot, l=l):
            return float((mode_ab(V, l, math.log(k) + 1j * math.pi / 2)[0] * rot).real)
        roots = []
        for i in np.flatnonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0):
            roots.append(optimize.brentq(fk, kappas[i], kappas[i + 1], xtol=1e-15, rtol=1e-15))
        # argument-principle cross-check on a thin box around the imaginary axis
        n = count_zeros(V, l, (math.log(kappas[0]), math.log(kmax) + 1e-3,
                               math.pi / 2 - 0.05, math.pi / 2 + 0.05))
        if n != len(roots):
            raise ContourError("eigenvalue count mismatch", l=l, sign_changes=len(roots),
                               winding=n)
        found.extend((k, multiplicity(V.d, l)) for k in roots)
    found.sort(key=lambda t: -t[0])
    merged = []
    for k, m in found:
        if merged and abs(merged[-1][0] - k) < 1e-10 * k:
            merged[-1] = (merged[-1][0], merged[-1][1] + m)
        else:
            merged.append((k, m))
    return merged


def counting_window_filter(resonances, r):
    """Resonances with ``|log|lambda|| < log r`` and ``|arg lambda| < log r``."""
    lr = math.log(r)
    return [x for x in resonances if abs(x.z.x) < lr and abs(x.z.y) < lr]


def counting_function(V: StepPotential, r, workers=1, **kw) -> int:
    """``N(r)``: resonances with ``|log|lambda|| < log r`` and ``|arg lambda| < log r``."""
    r = float(r)
    if not r > 1:
        raise DomainError("r must exceed 1", r=r)
    if V.is_zero:
        return 0
    lr = math.log(r)
    res = find_resonances(V, SearchWindow((-lr, lr), (-lr, lr), **kw), workers=workers)
    return sum(x.mu_contribution for x in res)
