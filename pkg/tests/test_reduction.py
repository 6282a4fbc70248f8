from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mechqst.dynamics import ModelKind, ModelType, assemble_model
from mechqst.experiment import default_scenario, run_scenario
from mechqst.params import TWO_PI, derive_params, telecom_params
from mechqst.pulses import DriveSample, ProtocolKind, PulseParams
from mechqst.reduction import (
    elimination_sums, effective_dynamics, fiber_coupling_diagnostic, frequency_shift_residual,
    gamma_matrix, truncation_error,
)


def closed_direct(a, b):
    x = np.pi * a / b
    return np.pi / np.tanh(x) / (2 * a * b) - 1 / (2 * a * a)


def closed_alternating(a, b):
    x = np.pi * a / b
    return np.pi / np.sinh(x) / (2 * a * b) - 1 / (2 * a * a)


def test_series_identities_at_defaults(telecom):
    p, d = telecom
    a, b = d.gamma_f_tilde, p.delta_fsr
    s, alt = elimination_sums(a, b, None)
    assert s / 2 == pytest.approx(closed_direct(a, b), rel=1e-10)
    assert alt / 2 == pytest.approx(closed_alternating(a, b), rel=1e-10)


@pytest.mark.parametrize("ratio", np.geomspace(1e-3, 10, 13))
def test_series_identities_over_ratio(ratio):
    b = 1e9
    a = ratio * b
    s, alt = elimination_sums(a, b, None)
    assert s / 2 == pytest.approx(closed_direct(a, b), rel=1e-10)
    assert alt / 2 == pytest.approx(closed_alternating(a, b), rel=1e-10)


@pytest.mark.parametrize("n", [0, 1, 2, 7, 50])
def test_partial_sums_brute_force(n):
    a, b = 3.0, 2.0
    k = np.arange(1, n + 1)
    terms = 1 / (a * a + k * k * b * b)
    s, alt = elimination_sums(a, b, n)
    assert s == pytest.approx(2 * terms.sum(), rel=1e-14, abs=0)
    assert alt == pytest.approx(2 * np.sum((-1.0) ** k * terms), rel=1e-13, abs=0)


def test_sums_reject_bad_inputs():
    with pytest.raises(ValueError):
        elimination_sums(1.0, 0.0)
    with pytest.raises(ValueError):
        elimination_sums(-1.0, 1.0)


def test_small_loss_asymptote(telecom):
    p, d = telecom
    gft = 1e-3 * p.delta_fsr
    G1 = 1e7
    eff = gamma_matrix(p, d, G1, 0.0, None, gamma_f_tilde=gft)
    g1 = d.chi / p.kappa0 * G1
    assert eff.gamma11 == pytest.approx(gft * g1**2 * np.pi**2 / (3 * p.delta_fsr**2), rel=0.01)


@settings(max_examples=100, deadline=None)
@given(G1=st.floats(-1e8, 1e8), G2=st.floats(-1e8, 1e8), fsr=st.floats(0.3, 20.0))
def test_gamma_matrix_positive_semidefinite(G1, G2, fsr):
    p = telecom_params(fsr_over_lambda0=fsr)
    d = derive_params(p)
    eff = gamma_matrix(p, d, G1, G2)
    eig = np.linalg.eigvalsh(eff.matrix())
    assert eig.min() >= -1e-12 * max(1.0, abs(eig).max())
    flipped = gamma_matrix(p, d, G1, -G2)
    assert flipped.gamma12 == -eff.gamma12
    assert flipped.gamma11 == eff.gamma11


def test_frequency_shifts_cancel(telecom):
    p, d = telecom
    eff = gamma_matrix(p, d, 1e7, 0.0)
    assert abs(frequency_shift_residual(p, d, 1e7)) < 1e-12 * eff.gamma11


def test_zero_eliminated_modes_is_single_model(telecom):
    p, d = telecom
    drive = DriveSample(0.0, -3e7, 2e7, 0.0)
    A0, D0 = assemble_model(ModelKind.single(), p, d, drive)
    A1, D1 = assemble_model(ModelKind.effective(0), p, d, drive)
    np.testing.assert_array_equal(A0, A1)
    np.testing.assert_array_equal(D0, D1)


def test_effective_approaches_single_for_large_fsr():
    base = default_scenario("SAP", T=500e-9, fsr_over_lambda0=100.0)
    f_single = run_scenario(base, keep_trace=False).final_fidelity
    f_eff = run_scenario(replace(base, model=ModelKind.effective()), keep_trace=False).final_fidelity
    assert abs(f_eff - f_single) < 1e-4


def test_effective_dynamics_builds_model(telecom):
    p, d = telecom
    m = effective_dynamics(p, d, ProtocolKind.AP, PulseParams(p.lambda0, 1e-6), n_elim=10)
    assert m.kind.type is ModelType.EFFECTIVE_SINGLE_MODE
    assert m.kind.n_elim == 10


def test_truncation_error_examples():
    assert truncation_error({1: 0.5, 3: 0.5}) == {3: 0.0}
    eps = truncation_error({1: 0.4, 3: 0.5, 5: 0.5})
    assert eps[3] == pytest.approx(2 * 0.1 / 0.9)
    assert eps[5] == 0.0
    with pytest.raises(KeyError):
        truncation_error({1: 0.4, 5: 0.5})


def test_fiber_coupling_diagnostic(telecom):
    p, d = telecom
    ratio = fiber_coupling_diagnostic(p, d)
    assert ratio < 0.01
    assert fiber_coupling_diagnostic(p, replace(d, chi=0.0)) == 0.0
    p2 = p.replace(delta_fsr=2 * p.delta_fsr)
    assert fiber_coupling_diagnostic(p2, d) == pytest.approx(ratio / 2, rel=1e-14)
    with pytest.raises(ValueError):
        fiber_coupling_diagnostic(p, d, 0)
