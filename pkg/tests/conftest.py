import numpy as np
import pytest

from mechqst.params import TWO_PI, derive_params, telecom_params
from mechqst.pulses import PulseParams


@pytest.fixture
def telecom():
    p = telecom_params()
    return p, derive_params(p)


@pytest.fixture
def pulse500():
    return PulseParams(lambda0=TWO_PI * 10e6, T=500e-9)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n].line)
