"""Adaptive phase tracking along closed contours in the z-plane."""
from __future__ import annotations

import math

import numpy as np

from .errors import ContourError

_MAX_STEP = math.pi / 4
_MAX_LOG_STEP = 0.7


def circle(center, radius):
    center = complex(center)

    def path(t):
        return center + radius * np.exp(2j * math.pi * t)
    return path


def box(x0, x1, y0, y1):
    """Counter-clockwise rectangle boundary parametrised by perimeter fraction."""
    w, h = x1 - x0, y1 - y0
    per = 2 * (w + h)
    corners = np.array([complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)])
    lengths = np.array([w, h, w, h]) / per
    starts = np.concatenate([[0.0], np.cumsum(lengths)[:-1]])
    dirs = np.array([w, 1j * h, -w, -1j * h])

    def path(t):
        t = np.asarray(t, dtype=float)
        seg = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, 3)
        frac = (t - starts[seg]) / lengths[seg]
        return corners[seg] + frac * dirs[seg]
    return path, starts


def winding(f, path, n0=64, max_points=1 << 15, breaks=(), min_dt=1e-10):
    """Winding numbers of the rows of ``f(path(t))`` over ``t`` in [0, 1).

    ``f`` maps a 1-d array of z values to an array ``(K, M)``. Intervals are
    bisected until every row changes phase by less than pi/4 and modulus by
    less than a factor 2 per step. ``n0`` must resolve the oscillation scale
    of ``f``; refinement cannot recover a full turn hidden between samples.
    Returns ``(w, min_abs)``: real winding numbers and, per row, the
    smallest modulus seen on the contour.
    """
    t = np.union1d(np.linspace(0.0, 1.0, n0, endpoint=False), np.asarray(breaks, dtype=float))
    vals = np.atleast_2d(f(path(t)))
    while True:
        tt = np.append(t, 1.0)
        vv = np.concatenate([vals, vals[:, :1]], axis=1)
        if not np.all(np.isfinite(vv)) or np.any(vv == 0):
            raise ContourError("function vanishes or overflows on the contour")
        ratio = vv[:, 1:] / vv[:, :-1]
        dphi = np.angle(ratio)
        bad = np.any((np.abs(dphi) > _MAX_STEP) | (np.abs(np.log(np.abs(ratio))) > _MAX_LOG_STEP),
                     axis=0)
        if not bad.any():
            break
        dt = np.diff(tt)
        if np.any(dt[bad] < min_dt) or t.size + bad.sum() > max_points:
            raise ContourError("phase not resolved on the contour (zero close to it)",
                               points=int(t.size))
        mid = tt[:-1][bad] + dt[bad] / 2
        mv = np.atleast_2d(f(path(mid)))
        t = np.concatenate([t, mid])
        vals = np.concatenate([vals, mv], axis=1)
        order = np.argsort(t, kind="stable")
        t, vals = t[order], vals[:, order]
    return dphi.sum(axis=1) / (2 * math.pi), np.abs(vals).min(axis=1)


def samples_for(length, rate, step=0.3, lo=64, hi=1 << 14):
    """Initial sample count for a contour of z-length ``length`` on which
    ``f`` varies at rate ``rate`` (log-derivative bound)."""
    return int(np.clip(math.ceil(length * rate / step), lo, hi))


def integer_winding(w, tol=0.1):
    n = np.rint(w)
    if np.any(np.abs(w - n) > tol):
        raise ContourError("winding number is not close to an integer",
                           winding=[float(v) for v in np.atleast_1d(w)][:8])
    return n.astype(np.int64)
