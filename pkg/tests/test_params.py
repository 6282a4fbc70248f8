import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mechqst.params import (
    TWO_PI, DerivedParams, SystemParams, derive_params, fsr_for_kappa_multiple,
    fsr_from_length, telecom_params, validate_regime,
)


def _by_name(diags):
    return {d.name: d for d in diags}


def test_telecom_branching_ratio_and_length(telecom):
    p, d = telecom
    assert d.eta == pytest.approx(0.025, rel=0.1)
    assert d.fiber_length == pytest.approx(0.58, rel=0.1)
    # the FSR rule holds exactly
    assert p.delta_fsr == pytest.approx(5 * d.kappa, rel=1e-12)


def test_cavity_induced_fiber_damping_arithmetic():
    kappa0 = TWO_PI * 50e6
    p = telecom_params().replace(kappa0=kappa0, gamma_f=TWO_PI * 1.5e3)
    d = derive_params(p, 0.2)
    assert d.chi == pytest.approx(TWO_PI * 10e6, rel=1e-14)
    assert d.gamma_f_tilde - p.gamma_f == pytest.approx(TWO_PI * 2e6, rel=1e-12)


@pytest.mark.parametrize("ratio, eta, kappa_over_fsr", [
    (0.5, 0.557, 22.6), (1.0, 0.386, 8.1), (2.0, 0.239, 3.3),
])
def test_multimode_presets(ratio, eta, kappa_over_fsr):
    p = telecom_params(fsr_over_lambda0=ratio)
    d = derive_params(p)
    assert d.eta == pytest.approx(eta, abs=2e-3)
    assert d.kappa / p.delta_fsr == pytest.approx(kappa_over_fsr, abs=0.05)


def test_zero_coupling_rejected():
    p = telecom_params().replace(gamma_f=0.0)
    with pytest.raises(ValueError):
        derive_params(p, 0.0)


@pytest.mark.parametrize("field", ["omega_m", "lambda0", "kappa0", "delta_fsr"])
@pytest.mark.parametrize("value", [0.0, -1.0, float("nan")])
def test_nonpositive_rates_rejected(field, value):
    with pytest.raises(ValueError):
        telecom_params().replace(**{field: value})


def test_negative_occupation_rejected():
    with pytest.raises(ValueError):
        telecom_params(n_th=-0.1)


def test_fsr_helpers_roundtrip(telecom):
    p, d = telecom
    assert fsr_from_length(d.fiber_length) == pytest.approx(p.delta_fsr, rel=1e-14)
    with pytest.raises(ValueError):
        fsr_from_length(0.0)


def test_telecom_regime_passes(telecom):
    p, d = telecom
    diags = validate_regime(p, d)
    assert all(x.passed for x in diags), diags


def test_small_fsr_fails_effective_check():
    p = telecom_params(fsr_over_lambda0=0.5)
    diags = _by_name(validate_regime(p, derive_params(p)))
    assert not diags["effective_model"].passed


def test_weak_cavity_decay_fails_elimination_check():
    p = telecom_params(kappa0_ratio=1.0)
    diags = _by_name(validate_regime(p, derive_params(p)))
    assert not diags["cavity_elimination"].passed


def test_resolved_sideband_flagged():
    p = telecom_params().replace(omega_m=TWO_PI * 50e6)
    diags = _by_name(validate_regime(p, derive_params(p)))
    assert not diags["resolved_sideband"].passed


rates = st.floats(1e5, 1e10)


@settings(max_examples=200, deadline=None)
@given(lambda0=rates, k_ratio=st.floats(1.0, 100.0), chi_ratio=st.floats(1e-3, 1.0),
       multiple=st.floats(0.1, 50.0), gamma_f=st.floats(0.0, 1e6))
def test_derived_invariants(lambda0, k_ratio, chi_ratio, multiple, gamma_f):
    kappa0 = k_ratio * lambda0
    delta = fsr_for_kappa_multiple(kappa0, chi_ratio * kappa0, multiple)
    p = SystemParams(omega_m=1e10, gamma_m=1e3, omega_c=1e15, lambda0=lambda0,
                     kappa0=kappa0, gamma_f=gamma_f, delta_fsr=delta)
    d = derive_params(p, chi_ratio)
    assert d.chi**2 == pytest.approx(d.kappa_f * p.delta_fsr / math.pi, rel=1e-12)
    assert 0.0 < d.eta < 1.0
    assert d.gamma_f_tilde >= p.gamma_f
    assert d.kappa >= p.kappa0
    assert p.delta_fsr == pytest.approx(multiple * d.kappa, rel=1e-9)
    # pure function of its inputs
    assert derive_params(p, chi_ratio) == d
    assert isinstance(d, DerivedParams)
