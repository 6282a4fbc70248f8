import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mechqst.params import TWO_PI
from mechqst.pulses import (
    ProtocolKind, PulseParams, base_pulses, counterdiabatic_rate, mixing_angle_and_ga,
    pulse_derivatives, pulse_table, sap_modified_pulses, sap_phase, sap_transform, schedule,
)

LAM = TWO_PI * 10e6


def test_center_values(pulse500):
    G1, G2 = base_pulses(pulse500, 250e-9)
    assert G1 == pytest.approx(-LAM / np.sqrt(2), rel=1e-14)
    assert G2 == pytest.approx(LAM / np.sqrt(2), rel=1e-14)


def test_mirror_symmetry(pulse500):
    t = np.linspace(0, pulse500.T, 1000)
    G1, _ = base_pulses(pulse500, t)
    _, G2r = base_pulses(pulse500, pulse500.T - t)
    np.testing.assert_allclose(G2r, -G1, rtol=1e-12, atol=1e-12 * LAM)


def test_counterintuitive_ordering(pulse500):
    G1, G2 = base_pulses(pulse500, 0.0)
    assert abs(G1) < 1e-5 * LAM
    assert abs(G2) > 100 * abs(G1)


def test_first_derivatives_finite_difference(pulse500, rng):
    p = pulse500
    h = 1e-6 * p.T
    t = rng.uniform(0, p.T, 100)
    dG1, dG2, _, _ = pulse_derivatives(p, t)
    a1, a2 = base_pulses(p, t + h)
    b1, b2 = base_pulses(p, t - h)
    floor = 1e-9 * LAM / p.sigma
    np.testing.assert_allclose((a1 - b1) / (2 * h), dG1, rtol=1e-6, atol=floor)
    np.testing.assert_allclose((a2 - b2) / (2 * h), dG2, rtol=1e-6, atol=floor)


def test_second_derivatives_finite_difference(pulse500, rng):
    p = pulse500
    h = 1e-4 * p.T
    t = rng.uniform(0, p.T, 100)
    _, _, d2G1, d2G2 = pulse_derivatives(p, t)
    a, c, b = base_pulses(p, t + h), base_pulses(p, t), base_pulses(p, t - h)
    floor = 1e-7 * LAM / p.sigma**2
    for k, an in ((0, d2G1), (1, d2G2)):
        fd = (a[k] - 2 * c[k] + b[k]) / h**2
        np.testing.assert_allclose(fd, an, rtol=1e-4, atol=floor)


def test_center_derivative(pulse500):
    dG1, _, _, _ = pulse_derivatives(pulse500, 250e-9)
    assert dG1 == pytest.approx(-LAM * np.pi / (4 * pulse500.sigma) * np.cos(np.pi / 4), rel=1e-12)


def test_ga_center_value_and_fd(pulse500):
    p = pulse500
    _, ga = mixing_angle_and_ga(p, p.T / 2)
    assert abs(ga) == pytest.approx(np.pi / (4 * 50e-9), rel=1e-14)
    assert abs(ga) == pytest.approx(1.5708e7, rel=1e-4)
    t = np.linspace(0.05, 0.95, 50) * p.T
    h = 1e-6 * p.T
    fd = (mixing_angle_and_ga(p, t + h)[0] - mixing_angle_and_ga(p, t - h)[0]) / (2 * h)
    np.testing.assert_allclose(fd, mixing_angle_and_ga(p, t)[1], rtol=1e-6)


def test_ga_even_about_center(pulse500):
    t = np.linspace(0, pulse500.T, 1001)
    ga = mixing_angle_and_ga(pulse500, t)[1]
    np.testing.assert_allclose(ga, ga[::-1], rtol=1e-12)


def test_ga_matches_quotient_form(pulse500):
    p = pulse500
    t = np.linspace(0.1, 0.9, 101) * p.T
    G1, G2 = base_pulses(p, t)
    dG1, dG2, _, _ = pulse_derivatives(p, t)
    np.testing.assert_allclose(counterdiabatic_rate(G1, G2, dG1, dG2), mixing_angle_and_ga(p, t)[1],
                               rtol=1e-10)


@pytest.mark.parametrize("ratio", [10.0, 20.0])
def test_mixing_angle_integral(ratio):
    T = 1e-6
    p = PulseParams(LAM, T, T / ratio)
    t = np.linspace(0, T, 200001)
    theta, ga = mixing_angle_and_ga(p, t)
    integral = np.trapezoid(ga, t) if hasattr(np, "trapezoid") else np.trapz(ga, t)
    assert integral == pytest.approx(theta[-1] - theta[0], rel=1e-6)
    # approaches -pi/2 as T/sigma grows
    assert abs(theta[-1] - theta[0] + np.pi / 2) <= np.pi / 2 * (1 - np.tanh(ratio / 2)) + 1e-12
    assert abs(theta[0]) < 1e-3


@pytest.mark.parametrize("ratio", [5.0, 10.0, 20.0])
def test_all_outputs_finite(ratio):
    T = 500e-9
    p = PulseParams(LAM, T, T / ratio)
    t = np.linspace(0, T, 10000)
    for arr in (*base_pulses(p, t), *pulse_derivatives(p, t), *mixing_angle_and_ga(p, t),
                *sap_modified_pulses(p, t)):
        assert np.all(np.isfinite(arr))


def test_sap_fixed_point_without_counterdiabatic_term(rng):
    g1, g2, dg1 = rng.normal(size=(3, 20))
    zero = np.zeros(20)
    g1t, g2t = sap_transform(g1, g2, dg1, zero, zero)
    np.testing.assert_array_equal(g1t, g1)
    np.testing.assert_array_equal(g2t, g2)


def test_sap_center_amplitude(pulse500):
    p = pulse500
    rho = p.coupling_ratio
    G1t, _ = sap_modified_pulses(p, p.T / 2)
    g1 = rho * base_pulses(p, p.T / 2)[0]
    ga = mixing_angle_and_ga(p, p.T / 2)[1]
    assert abs(rho * G1t) == pytest.approx(np.hypot(g1, ga), rel=1e-14)
    assert abs(rho * G1t) > abs(g1)


def test_sap_second_pulse_includes_phase_rate(pulse500):
    p = pulse500
    t = np.linspace(0.1, 0.9, 81) * p.T
    h = 1e-6 * p.T
    dphi = (sap_phase(p, t + h) - sap_phase(p, t - h)) / (2 * h)
    G2 = base_pulses(p, t)[1]
    G2t = sap_modified_pulses(p, t)[1]
    np.testing.assert_allclose(p.coupling_ratio * (G2t - G2), dphi, rtol=1e-5, atol=1e-6 * LAM)


def test_sap_first_pulse_advanced(pulse500):
    p = pulse500
    t = np.linspace(0, p.T, 4001)
    G1 = base_pulses(p, t)[0]
    G1t = sap_modified_pulses(p, t)[0]
    assert np.all(np.abs(G1t) >= np.abs(G1) - 1e-9 * LAM)
    w, wt = G1**2, G1t**2
    assert np.sum(t * wt) / np.sum(wt) < np.sum(t * w) / np.sum(w)
    # both edges at half maximum move earlier
    def support(g, frac):
        above = t[g > frac * g.max()]
        return above[0], above[-1]
    on, off = support(np.abs(G1), 0.5)
    on_t, off_t = support(np.abs(G1t), 0.5)
    assert on_t < on
    assert off_t < off


def test_schedule_examples(pulse500):
    p = pulse500
    ap = schedule(ProtocolKind.AP, p, p.T / 2)
    assert (ap.G1, ap.G2, ap.g_a) == pytest.approx((-LAM / np.sqrt(2), LAM / np.sqrt(2), 0.0))
    cd = schedule("CD_DIRECT", p, p.T / 2)
    assert abs(cd.g_a) == pytest.approx(np.pi / (4 * p.sigma))
    sap = schedule("SAP", p, np.linspace(0, p.T, 101))
    assert np.all(sap.g_a == 0)


def test_protocol_parse():
    assert ProtocolKind.parse("sap_modified") is ProtocolKind.SAP_MODIFIED
    assert ProtocolKind.parse("cd") is ProtocolKind.CD_DIRECT
    with pytest.raises(ValueError):
        ProtocolKind.parse("STIRAP")


@pytest.mark.parametrize("kw", [dict(T=0.0), dict(T=1e-6, sigma=2e-6), dict(T=1e-6, sigma=-1.0)])
def test_invalid_pulse_params(kw):
    with pytest.raises(ValueError):
        PulseParams(LAM, **kw)


def test_pulse_table_columns(pulse500):
    tab = pulse_table(pulse500, np.linspace(0, pulse500.T, 11))
    assert set(tab) == {"t", "G1", "G2", "G1_sap", "G2_sap", "g_a"}
    assert tab["G1"][5] == pytest.approx(-1 / np.sqrt(2))


@settings(max_examples=100, deadline=None)
@given(T=st.floats(1e-8, 1e-5), frac=st.floats(0.0, 1.0), ratio=st.floats(4.0, 30.0))
def test_pulses_bounded(T, frac, ratio):
    p = PulseParams(LAM, T, T / ratio)
    G1, G2 = base_pulses(p, frac * T)
    assert G1 <= 0 <= G2
    assert np.hypot(G1, G2) <= LAM * (1 + 1e-12)
