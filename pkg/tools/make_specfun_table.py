"""Regenerate src/evenres/data/specfun_reference.csv from mpmath (40 digits)."""
import math
import os

import mpmath

mpmath.mp.dps = 40
OUT = os.path.join(os.path.dirname(__file__), "..", "src", "evenres", "data",
                   "specfun_reference.csv")


def cover_h(kind, nu, x, y, r):
    # continuation of J and Y by m half-turns, then H = J +- iY
    m = 0
    y0 = mpmath.mpf(y)
    while y0 > mpmath.pi / 2:
        y0 -= mpmath.pi
        m += 1
    while y0 <= -mpmath.pi / 2:
        y0 += mpmath.pi
        m -= 1
    w = mpmath.exp(mpmath.mpf(x) + 1j * y0) * r
    sgn = (-1) ** (m * nu)
    J = sgn * mpmath.besselj(nu, w)
    Y = sgn * (mpmath.bessely(nu, w) + 2j * m * mpmath.besselj(nu, w))
    return J + 1j * Y if kind == 1 else J - 1j * Y


rows = []
for nu in (0, 1, 2, 5):
    for x, y in ((0.0, 0.3), (1.2, -0.7), (-1.0, 1.2), (2.5, 0.0)):
        w = mpmath.exp(mpmath.mpf(x) + 1j * mpmath.mpf(y))
        rows.append(("J", nu, x, y, 1.0, mpmath.besselj(nu, w), 1e-12))
        rows.append(("Y", nu, x, y, 1.0, mpmath.bessely(nu, w), 1e-12))
    for x, y, r in ((0.5, 2.0, 1.0), (0.0, -2.5, 0.7), (1.0, 4.0, 1.3), (-0.5, -7.0, 1.0),
                    (0.2, 15.0, 1.0)):
        rows.append(("H1", nu, x, y, r, cover_h(1, nu, x, y, r), 1e-10))
        rows.append(("H2", nu, x, y, r, cover_h(2, nu, x, y, r), 1e-10))
    for x, y, r in ((0.0, 0.0, 1.0), (1.0, 1.5, 0.6), (-0.3, -2.0, 2.0)):
        mu = mpmath.exp(mpmath.mpf(x) + 1j * mpmath.mpf(y))
        val = mpmath.besselj(nu, mu * r) / mu ** nu   # w = J_nu(mu r) / mu^nu
        rows.append(("W", nu, x, y, r, val, 1e-12))

with open(OUT, "w", newline="\n") as fh:
    fh.write("# function,nu,x,y,r,re_expected,im_expected,rel_tol\n")
    fh.write("# J,Y: argument w = exp(x+iy) r on the principal sheet\n")
    fh.write("# H1,H2: Hankel functions continued to the cover point (x, y), times r\n")
    fh.write("# W: regular radial solution J_nu(mu r)/mu^nu, mu = exp(x+iy)\n")
    for f, nu, x, y, r, v, tol in rows:
        v = complex(v)
        fh.write(f"{f},{nu},{x!r},{y!r},{r!r},{v.real!r},{v.imag!r},{tol!r}\n")
print(len(rows), "rows")
