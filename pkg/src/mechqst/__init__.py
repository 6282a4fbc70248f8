"""Gaussian state transfer between remote mechanical resonators over an optical fiber."""
from .gaussian import GaussianState, fidelity, make_squeezed_coherent, occupation, reduce_to_mode, vacuum
from .params import DerivedParams, SystemParams, derive_params, telecom_params, validate_regime
from .pulses import ProtocolKind, PulseParams, schedule
from .dynamics import Model, ModelKind, ModelOptions, integrate_moments, trace_fidelity

__version__ = "0.1.0"
