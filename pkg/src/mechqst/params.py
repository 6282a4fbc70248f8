"""Physical parameters of the two-node optomechanical network.

All frequencies and rates are angular (rad/s), times are in seconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

TWO_PI = 2.0 * math.pi
DEFAULT_LIGHT_SPEED = 3.0e8


@dataclass(frozen=True)
class SystemParams:
    omega_m: float
    gamma_m: float
    omega_c: float
    lambda0: float
    kappa0: float
    gamma_f: float
    delta_fsr: float
    n_th: float = 0.0
    fiber_light_speed: float = DEFAULT_LIGHT_SPEED

    def __post_init__(self):
        for name in ("omega_m", "omega_c", "lambda0", "kappa0", "delta_fsr", "fiber_light_speed"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value!r}")
        # zero intrinsic damping is allowed so that lossless limits can be simulated
        for name in ("gamma_m", "gamma_f", "n_th"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be non-negative, got {value!r}")

    def replace(self, **changes) -> "SystemParams":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return SystemParams(**values)


@dataclass(frozen=True)
class DerivedParams:
    chi: float
    kappa_f: float
    kappa: float
    eta: float
    gamma_f_tilde: float
    fiber_length: float


def derive_params(p: SystemParams, chi_ratio: float = 0.2) -> DerivedParams:
    """Cavity-fiber coupling and the quantities that follow from it.

    The cavity-fiber strength is ``chi = chi_ratio * kappa0``; the fiber decay
    then follows from ``chi**2 = kappa_f * delta_fsr / pi``.
    """
    if not (math.isfinite(chi_ratio) and chi_ratio > 0):
        raise ValueError(f"chi_ratio must be positive, got {chi_ratio!r}")
    chi = chi_ratio * p.kappa0
    kappa_f = math.pi * chi**2 / p.delta_fsr
    kappa = p.kappa0 + kappa_f
    eta = kappa_f / kappa
    if not 0.0 < eta < 1.0:
        raise ValueError(f"branching ratio out of (0, 1): {eta!r}")
    return DerivedParams(
        chi=chi,
        kappa_f=kappa_f,
        kappa=kappa,
        eta=eta,
        gamma_f_tilde=p.gamma_f + chi**2 / p.kappa0,
        fiber_length=math.pi * p.fiber_light_speed / p.delta_fsr,
    )


def fsr_for_kappa_multiple(kappa0: float, chi: float, multiple: float) -> float:
    """Free spectral range satisfying ``delta_fsr = multiple * kappa``.

    Since ``kappa = kappa0 + pi chi^2 / delta_fsr`` this is the positive root of
    ``delta^2 - multiple*kappa0*delta - multiple*pi*chi^2 = 0``.
    """
    b = multiple * kappa0
    return 0.5 * (b + math.sqrt(b * b + 4.0 * multiple * math.pi * chi**2))


def fsr_from_length(length: float, light_speed: float = DEFAULT_LIGHT_SPEED) -> float:
    if length <= 0:
        raise ValueError("fiber length must be positive")
    return math.pi * light_speed / length


def telecom_params(
    lambda0: float = TWO_PI * 10e6,
    kappa0_ratio: float = 5.0,
    chi_ratio: float = 0.2,
    fsr_over_kappa: float | None = 5.0,
    fsr_over_lambda0: float | None = None,
    n_th: float = 0.0,
) -> SystemParams:
    """Typical telecom-band values; cavity decay fixed at ``kappa0_ratio * lambda0``.

    Exactly one of ``fsr_over_kappa`` / ``fsr_over_lambda0`` sets the fiber FSR.
    """
    kappa0 = kappa0_ratio * lambda0
    if fsr_over_lambda0 is not None:
        delta_fsr = fsr_over_lambda0 * lambda0
    elif fsr_over_kappa is not None:
        delta_fsr = fsr_for_kappa_multiple(kappa0, chi_ratio * kappa0, fsr_over_kappa)
    else:
        raise ValueError("one of fsr_over_kappa, fsr_over_lambda0 is required")
    return SystemParams(
        omega_m=TWO_PI * 1e9,
        gamma_m=TWO_PI * 1e3,
        omega_c=TWO_PI * 193e12,
        lambda0=lambda0,
        kappa0=kappa0,
        gamma_f=TWO_PI * 1.5e3,
        delta_fsr=delta_fsr,
        n_th=n_th,
    )


@dataclass(frozen=True)
class Diagnostic:
    name: str
    passed: bool
    margin: float  # ratio of the two sides of the inequality; >= 1 passes
    detail: str = ""


def validate_regime(p: SystemParams, d: DerivedParams, model_kind=None) -> list[Diagnostic]:
    """Check the approximations each model relies on.

    ``model_kind`` is accepted for symmetry with the model builders; every
    check is always reported and callers decide which ones matter.
    """
    checks = []

    def add(name, lhs, rhs, detail):
        margin = lhs / rhs if rhs > 0 else math.inf
        # presets sit exactly on some thresholds
        checks.append(Diagnostic(name, margin >= 1.0 - 1e-9, margin, detail))

    add("resolved_sideband", 0.1 * p.omega_m, d.kappa, "kappa <= 0.1 omega_m")
    add("cavity_elimination", p.kappa0, 5.0 * max(p.lambda0, d.chi), "kappa0 >= 5 max(lambda0, chi)")
    add("single_mode_fiber", p.delta_fsr, 5.0 * d.kappa, "delta_fsr >= 5 kappa")
    add("effective_model", p.delta_fsr, p.lambda0, "delta_fsr >= lambda0")
    coupling = d.chi**2
    add(
        "fiber_diagonalization",
        p.delta_fsr * p.kappa0,
        10.0 * coupling,
        "delta_fsr kappa0 >= 10 chi^2",
    )
    return checks
