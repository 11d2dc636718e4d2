import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from evenres import (CoverPoint, InputError, SearchWindow, StepPotential, find_eigenvalues,
                     find_resonances, heat_trace, heat_trace_many)
from evenres import verify as vf
from evenres.radial import integral_V

# relative heat trace of the d=2, v=-1, R=1 well at t=1e-3 from the Dirichlet-ball
# eigenvalue oracle (tests/oracles.py: box_heat_trace, Rb=1.6 and Rb=2.0 agree to 1e-15)
BOX_H_1E3 = 0.25012328932502353


def test_report_pass_logic():
    r = vf.VerificationReport("x", {})
    r.record("a", 1.0, 2.0)
    r.record("b", 3.0, 2.0, upper=False)
    assert r.passed
    r.record("c", math.nan, 1.0)
    assert not r.passed
    assert set(r.to_dict()) >= {"check", "residuals", "tolerances", "pass", "runtime"}


def test_fit_exponent():
    x = np.geomspace(1, 100, 10)
    assert abs(vf.fit_exponent(x, 3 * x ** -1.5) + 1.5) < 1e-12


def test_high_energy_free():
    rep = vf.check_high_energy(StepPotential.zero(4), np.linspace(10, 80, 8))
    assert rep.passed


def test_high_energy_d2(well5):
    rep = vf.check_high_energy(well5, np.linspace(10, 80, 15))
    assert rep.passed and rep.exponents["slope"] <= -1.0


def test_high_energy_d4(bump4):
    rep = vf.check_high_energy(bump4, np.linspace(40, 80, 9))
    assert rep.passed
    lead = -2 * integral_V(bump4) / (8 * math.pi)
    assert abs(rep.exponents["coefficient"] / lead - 1) < 0.02
    assert rep.exponents["slope"] <= 4 - 3.4


def test_low_energy():
    assert vf.check_low_energy(StepPotential.zero(4)).passed
    rep = vf.check_low_energy(StepPotential.well(4, -1.0, 1.0))
    assert not rep.skipped and rep.passed and rep.exponents["exponent"] >= 0.8
    rep6 = vf.check_low_energy(StepPotential.well(6, -2.0, 1.0))
    assert rep6.passed and rep6.exponents["exponent"] >= 6 - 3 - 0.2
    with pytest.raises(InputError):
        vf.check_low_energy(StepPotential.well(2, -1.0, 1.0))


def test_zero_energy_anomaly_flag():
    # l=0, d=4: zero-energy resonance when J_0(sqrt(-v) R) = 0
    j01 = 2.404825557695773
    flag, _ = vf.zero_energy_anomaly(StepPotential.well(4, -j01 ** 2, 1.0))
    assert flag
    flag, _ = vf.zero_energy_anomaly(StepPotential.well(4, -1.0, 1.0))
    assert not flag
    rep = vf.check_low_energy(StepPotential.well(4, -j01 ** 2, 1.0))
    assert rep.skipped


def test_klimit():
    assert vf.check_klimit(StepPotential.zero(2)).passed
    rep = vf.check_klimit(StepPotential.well(2, -5.0, 1.0), rho=3.0, k_max=10 ** 4)
    assert rep.passed
    assert -1.3 <= rep.exponents["decay"] <= -0.7


def test_eigenvalue_lattice_repulsive():
    rep = vf.check_eigenvalue_lattice(StepPotential.well(2, 5.0, 1.0))
    assert rep.passed and not rep.residuals


def test_eigenvalue_lattice_physical_sheet(well20):
    rep = vf.check_eigenvalue_lattice(well20)
    for i in range(4):
        assert rep.residuals[f"eig{i}_physical_mu_error"] == 0
    assert rep.passed


def test_multiplicity_relation_points(well5):
    res = find_resonances(well5, SearchWindow.from_modulus_arg(0.5, 6.0, -math.pi, 0.0,
                                                               modes=(0, 1)))
    r0 = next(r for r in res if r.mode.l == 0)
    r1 = next(r for r in res if r.mode.l == 1)
    rep = vf.check_multiplicity_relation(well5, [r0, r1, CoverPoint(0.3, -0.2)])
    assert rep.passed
    rows = rep.exponents["rows"]
    assert rows[0][2:] == (1, 1)       # simple l=0 resonance: 1 - 0 = -msc = 1
    assert rows[1][2:] == (2, 2)       # l=1 resonance, m_1 = 2
    assert rows[2][2:] == (0, 0)       # non-resonant point


def test_heat_free_and_validation():
    assert heat_trace(StepPotential.zero(2), 0.1).H == 0
    with pytest.raises(Exception):
        heat_trace_many(StepPotential.well(2, -1.0, 1.0), [0.0])


def test_heat_against_box_oracle():
    h = heat_trace(StepPotential.well(2, -1.0, 1.0), 1e-3)
    assert abs(h.H - BOX_H_1E3) < 1e-8
    assert abs(h.H / 0.25 - 1) < 0.05    # leading term -int V / (4 pi)


def test_heat_large_t_eigenvalue_dominates(well5):
    (kappa, m), = find_eigenvalues(well5)
    s = heat_trace_many(well5, [2.0, 5.0, 10.0])
    dev = [abs(x.H / (m * math.exp(x.t * kappa ** 2)) - 1) for x in s]
    assert dev[0] > dev[1] > dev[2] and dev[2] < 1e-9
    # the scattering part stays bounded as the eigenvalue term grows
    rest = [x.H - m * math.exp(x.t * kappa ** 2) for x in s]
    assert max(abs(r) for r in rest) < 2


def test_heat_representation_invariance():
    V = StepPotential(2, (0.5, 1.0), (-1.0, 0.5))
    W = V.refined([0.25, 0.8])
    a = heat_trace_many(V, [0.01, 0.05])
    b = heat_trace_many(W, [0.01, 0.05])
    for x, y in zip(a, b):
        assert abs(x.H - y.H) < 1e-8


def test_heat_coefficients_validation():
    with pytest.raises(InputError):
        vf.heat_coefficients(StepPotential.well(2, -1.0, 1.0), [0.01, 0.02])
    fit = vf.heat_coefficients(StepPotential.zero(2), np.linspace(0.005, 0.05, 8))
    assert np.all(np.abs(fit.values) < 1e-12)


def test_check_heat():
    rep = vf.check_heat(StepPotential.well(2, -1.0, 1.0), [1e-3])
    assert rep.passed


def test_compare_self_and_refined(well5):
    win = SearchWindow.from_modulus_arg(0.5, 5.0, -math.pi, 0.0)
    assert vf.compare_resonance_sets(well5, well5, win).empty
    rep = vf.compare_resonance_sets(well5, well5.refined([0.3, 0.7]), win)
    assert rep.empty and rep.det_ratio_residual < 1e-9
    other = vf.compare_resonance_sets(well5, StepPotential.well(2, -6.0, 1.0), win)
    assert not other.empty
    assert other.only_first and other.only_second
    with pytest.raises(InputError):
        vf.compare_resonance_sets(well5, StepPotential.well(4, -6.0, 1.0), win)


@given(st.floats(-8.0, 8.0).filter(lambda v: abs(v) > 0.1))
def test_klimit_mobius_limit_any_well(v):
    V = StepPotential.well(2, v, 1.0)
    ks = np.array([1000, 10000])
    vals = vf.klimit_values(V, 3.0, ks)
    dev = np.abs(vals - 1)
    assert dev[1] < dev[0]
