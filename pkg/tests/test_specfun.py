import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from evenres import CoverPoint, DomainError, RangeError
from evenres import specfun as sf

# frozen from the mpmath series oracles (tests/oracles.py: j_series, y_series)
J0_1 = 0.7651976865579666
Y0_1 = 0.08825696421567696
W_PT = 1.7 + 0.3j
J0_W = 0.4006040075493593 - 0.1751905236212418j
Y0_W = 0.4798982353866123 + 0.08463541229251556j


def test_bessel_examples():
    assert sf.bessel_j(0, 0) == 1
    assert sf.bessel_j(1, 0) == 0
    assert abs(sf.bessel_j(0, 1) - J0_1) < 1e-15
    assert abs(sf.bessel_y(0, 1) - Y0_1) < 1e-15
    assert abs(sf.bessel_j(0, W_PT) - J0_W) < 1e-14
    assert abs(sf.bessel_y(0, W_PT) - Y0_W) < 1e-14


def test_y0_log_singularity_bounded():
    w = np.geomspace(1e-12, 1e-2, 20)
    rest = np.real(sf.bessel_y(0, w)) - 2 / math.pi * np.log(w / 2)
    assert np.all(np.abs(rest) < 1)


def test_wronskian_example():
    wr = sf.wronskian_jy(0, W_PT)
    assert abs(wr / (2 / (math.pi * W_PT)) - 1) < 1e-12


def test_wronskian_grid():
    rng = np.random.default_rng(1)
    nu = rng.integers(0, 7, 200)
    w = rng.uniform(0.3, 30, 200) * np.exp(1j * rng.uniform(-0.5, 0.5, 200))
    w = w.real + 1j * np.clip(w.imag, -2, 2)
    rel = np.abs(sf.wronskian_jy(nu, w) * math.pi * w / 2 - 1)
    assert rel.max() < 1e-12


def test_domain_errors():
    with pytest.raises(DomainError):
        sf.bessel_j(-1, 1.0)
    with pytest.raises(DomainError):
        sf.bessel_j(0.5, 1.0)
    with pytest.raises(DomainError):
        sf.bessel_y(0, -1.0)
    with pytest.raises(DomainError):
        sf.bessel_y(0, 0.0)
    with pytest.raises(RangeError):
        sf.bessel_j(0, 1000j)
    with pytest.raises(DomainError):
        sf.hankel_on_cover(3, 0, CoverPoint(0, 0), 1.0)
    with pytest.raises(DomainError):
        sf.hankel_on_cover(1, 0, CoverPoint(0, 0), -1.0)


@given(st.integers(0, 6), st.floats(-1.2, 3.4), st.floats(-math.pi / 2 + 1e-3, math.pi / 2))
def test_principal_sheet_hankels(nu, x, y):
    p = CoverPoint(x, y)
    w = np.exp(x + 1j * y)
    h1 = sf.hankel_on_cover(1, nu, p, 1.0)
    h2 = sf.hankel_on_cover(2, nu, p, 1.0)
    j = sf.bessel_j(nu, w)
    scale = abs(h1) + abs(h2)
    assert abs(h1 + h2 - 2 * j) < 1e-12 * scale
    from scipy import special
    assert abs(h1 - special.hankel1(nu, w)) < 1e-13 * abs(h1)


@given(st.integers(0, 6), st.floats(math.log(0.3), math.log(30)), st.floats(-1.5, 1.5),
       st.integers(-5, 5))
def test_loop_closure(nu, x, y, m):
    # values continued by m half-turns, brought back with the J/Y rules
    # J(w e^{i m pi}) = (-1)^{m nu} J(w), Y(w e^{i m pi}) = (-1)^{m nu} (Y(w) + 2 i m J(w))
    h1 = sf.hankel_on_cover(1, nu, CoverPoint(x, y + m * math.pi), 1.0)
    h2 = sf.hankel_on_cover(2, nu, CoverPoint(x, y + m * math.pi), 1.0)
    sgn = (-1) ** (m * nu)
    j = sgn * (h1 + h2) / 2
    yv = sgn * (h1 - h2) / 2j - 2j * m * j
    here1 = sf.hankel_on_cover(1, nu, CoverPoint(x, y), 1.0)
    here2 = sf.hankel_on_cover(2, nu, CoverPoint(x, y), 1.0)
    scale = abs(h1) + abs(h2) + abs(here1) + abs(here2)
    assert abs(j + 1j * yv - here1) < 1e-10 * scale
    assert abs(j - 1j * yv - here2) < 1e-10 * scale


def test_one_loop_monodromy_increment():
    # H1(w e^{2 pi i}) - H1(w) = -2 (H1 + H2)(w) = -4 J(w) for integer order
    rng = np.random.default_rng(3)
    for _ in range(20):
        nu = int(rng.integers(0, 7))
        x, y = rng.uniform(-1, 3), rng.uniform(-1.4, 1.4)
        w = np.exp(x + 1j * y)
        d1 = sf.hankel_on_cover(1, nu, CoverPoint(x, y + 2 * math.pi), 1.0) - \
            sf.hankel_on_cover(1, nu, CoverPoint(x, y), 1.0)
        d2 = sf.hankel_on_cover(2, nu, CoverPoint(x, y + 2 * math.pi), 1.0) - \
            sf.hankel_on_cover(2, nu, CoverPoint(x, y), 1.0)
        j = sf.bessel_j(nu, w)
        scale = abs(sf.hankel_on_cover(1, nu, CoverPoint(x, y), 1.0)) + abs(j)
        assert abs(d1 + 4 * j) < 1e-12 * scale
        assert abs(d2 - 4 * j) < 1e-12 * scale


def test_large_argument_asymptotic():
    x = np.geomspace(20, 2000, 20)
    nu = 3
    h = sf.hankel_on_cover(1, nu, np.log(x).astype(complex), 1.0)
    dev = np.abs(h * np.sqrt(math.pi * x / 2) * np.exp(-1j * (x - nu * math.pi / 2 - math.pi / 4)) - 1)
    slope = np.polyfit(np.log(x), np.log(dev), 1)[0]
    assert slope <= -0.9


def test_regular_radial_examples():
    nu = np.arange(7)
    r = 0.7
    w, dw = sf.regular_radial(nu, 0.0, r)
    np.testing.assert_allclose(w, r ** nu, rtol=1e-15)
    w1, _ = sf.regular_radial(0, 1.0, 1.0)
    assert abs(w1 - J0_1) < 1e-15


@given(st.integers(0, 8), st.complex_numbers(max_magnitude=400), st.floats(0.05, 2.0))
def test_regular_radial_even_in_mu(nu, mu, r):
    # the value depends on mu^2 only: compare with the J-form using -mu
    mu2 = mu * mu
    w, dw = sf.regular_radial(nu, mu2, r)
    if abs(mu) < 1e-3:
        # reference formula divides by mu^nu; the series is exact there anyway
        np.testing.assert_allclose(w, r ** nu * (1 - mu2 * r * r / (4 * (nu + 1))), rtol=1e-12)
        return
    from scipy import special
    if abs((mu * r).imag) > 600:
        return
    for m in (mu, -mu):
        ref = math.factorial(nu) * (2 / m) ** nu * special.jv(nu, m * r)
        assert abs(w - ref) <= 1e-9 * max(abs(ref), abs(w)) + 1e-300


def test_radial_pair_wronskian():
    rng = np.random.default_rng(7)
    nu = rng.integers(0, 9, 300)
    mu2 = rng.uniform(-200, 200, 300) + 1j * rng.uniform(-200, 200, 300)
    r = rng.uniform(0.05, 1.5, 300)
    p, dp, q, dq = sf.radial_pair(nu, mu2, r)
    wr = (p * dq - dp * q) * r / (2 * np.maximum(nu, 1))
    scale = (np.abs(p * dq) + np.abs(dp * q)) * r / (2 * np.maximum(nu, 1))
    assert np.max(np.abs(wr - 1) / np.maximum(scale, 1)) < 1e-12


def test_fixture_self_test():
    res = sf.self_test()
    assert len(res) >= 80
    bad = [(rec, err) for rec, err, ok in res if not ok]
    assert not bad


def test_extended_precision_mode(monkeypatch):
    monkeypatch.setenv("EVENRES_EXTENDED_PRECISION", "1")
    assert abs(sf.bessel_j(0, 1.0) - J0_1) < 1e-15
    h = sf.hankel_on_cover(1, 2, CoverPoint(0.3, 2.0), 1.0)
    monkeypatch.delenv("EVENRES_EXTENDED_PRECISION")
    h0 = sf.hankel_on_cover(1, 2, CoverPoint(0.3, 2.0), 1.0)
    assert abs(h - h0) < 1e-13 * abs(h0)
