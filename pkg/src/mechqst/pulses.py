"""Drive envelopes for adiabatic passage and its counterdiabatic variants.

Envelopes are evaluated in closed form and accept scalar or array times.
Couplings ``G1, G2`` are the linearized optomechanical rates at each node;
``g_i = coupling_ratio * G_i`` are the fiber-mechanical rates they induce.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class ProtocolKind(enum.Enum):
    AP = "AP"
    SAP_MODIFIED = "SAP"
    CD_DIRECT = "CD"

    @classmethod
    def parse(cls, value) -> "ProtocolKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper()
        aliases = {"SAP_MODIFIED": "SAP", "CD_DIRECT": "CD"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class PulseParams:
    lambda0: float
    T: float
    sigma: float | None = None
    coupling_ratio: float = 0.2  # chi / kappa0

    def __post_init__(self):
        if self.sigma is None:
            object.__setattr__(self, "sigma", 0.1 * self.T)
        if not self.T > 0:
            raise ValueError("pulse duration must be positive")
        if not 0 < self.sigma < self.T:
            raise ValueError("pulse width must lie in (0, T)")
        if not self.lambda0 > 0 or not self.coupling_ratio > 0:
            raise ValueError("lambda0 and coupling_ratio must be positive")


@dataclass(frozen=True)
class DriveSample:
    t: float
    G1: float
    G2: float
    g_a: float = 0.0


def _sech_tanh(x):
    # 1/cosh overflows for |x| > 710
    ax = np.abs(x)
    em = np.exp(-ax)
    sech = 2.0 * em / (1.0 + em * em)
    return sech, np.tanh(x)


def _pieces(p: PulseParams, t):
    x = (np.asarray(t, dtype=float) - 0.5 * p.T) / p.sigma
    e, th = _sech_tanh(x)
    psi = 0.25 * np.pi * (1.0 + th)
    return e, th, psi


def base_pulses(p: PulseParams, t):
    e, _, psi = _pieces(p, t)
    return -p.lambda0 * e * np.sin(psi), p.lambda0 * e * np.cos(psi)


def pulse_derivatives(p: PulseParams, t):
    """First and second time derivatives ``(dG1, dG2, d2G1, d2G2)``."""
    e, th, psi = _pieces(p, t)
    s = p.sigma
    de = -e * th / s
    d2e = e * (th * th - e * e) / s**2
    dpsi = 0.25 * np.pi * e * e / s
    d2psi = -0.5 * np.pi * e * e * th / s**2
    sn, cs = np.sin(psi), np.cos(psi)
    lam = p.lambda0
    dG1 = -lam * (de * sn + e * cs * dpsi)
    dG2 = lam * (de * cs - e * sn * dpsi)
    d2G1 = -lam * (d2e * sn + 2 * de * cs * dpsi - e * sn * dpsi**2 + e * cs * d2psi)
    d2G2 = lam * (d2e * cs - 2 * de * sn * dpsi - e * cs * dpsi**2 - e * sn * d2psi)
    return dG1, dG2, d2G1, d2G2


def mixing_angle_and_ga(p: PulseParams, t):
    """Mixing angle ``arctan(g1/g2)`` and counterdiabatic rate ``g_a = d(theta)/dt``.

    For this pulse family the envelope cancels from the ratio, so both are
    returned in closed form, which stays finite where g1, g2 underflow.
    """
    e, _, psi = _pieces(p, t)
    return -psi, -0.25 * np.pi * e * e / p.sigma


def counterdiabatic_rate(g1, g2, dg1, dg2):
    """Quotient form of ``g_a`` for arbitrary couplings."""
    return (dg1 * g2 - g1 * dg2) / (g1 * g1 + g2 * g2)


def sap_transform(g1, g2, dg1, ga, dga):
    """Fold a counterdiabatic rate ``ga`` into the two local couplings.

    Frame rotation by ``phi = -arctan(ga/g1)`` on (f0, m2) cancels the direct
    mechanical coupling; returns ``(g1_tilde, g2_tilde)``.
    """
    g1, g2, dg1, ga, dga = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (g1, g2, dg1, ga, dga)))
    norm = np.hypot(g1, ga)
    with np.errstate(invalid="ignore", divide="ignore"):
        # d/dt of -arctan(ga/g1), normalised to stay finite as g1 -> 0
        dphi = np.where(norm > 0, -((dga / norm) * (g1 / norm) - (ga / norm) * (dg1 / norm)), 0.0)
    g1t = np.copysign(norm, g1)
    g2t = g2 + dphi
    if np.any(~np.isfinite(g1t)) or np.any(~np.isfinite(g2t)):
        raise FloatingPointError("non-finite modified pulse")
    if g1t.ndim == 0:
        return float(g1t), float(g2t)
    return g1t, g2t


def sap_modified_pulses(p: PulseParams, t):
    """Node envelopes that absorb the counterdiabatic term into local drives.

    Returns ``(G1_tilde, G2_tilde)`` scaled back to optomechanical rates.
    """
    e, th, _ = _pieces(p, t)
    rho = p.coupling_ratio
    G1, G2 = base_pulses(p, t)
    dG1, _, _, _ = pulse_derivatives(p, t)
    k = 0.25 * np.pi / p.sigma
    ga = -k * e * e
    dga = 2.0 * k * e * e * th / p.sigma
    g1t, g2t = sap_transform(rho * G1, rho * G2, rho * dG1, ga, dga)
    return g1t / rho, g2t / rho


def sap_phase(p: PulseParams, t):
    """Rotation angle ``phi = -arctan(g_a/g1)`` of the frame change."""
    G1, _ = base_pulses(p, t)
    _, ga = mixing_angle_and_ga(p, t)
    with np.errstate(divide="ignore"):
        return -np.arctan(ga / (p.coupling_ratio * G1))


def schedule(kind: ProtocolKind, p: PulseParams, t):
    kind = ProtocolKind.parse(kind)
    if kind is ProtocolKind.SAP_MODIFIED:
        G1, G2 = sap_modified_pulses(p, t)
        ga = np.zeros_like(G1)
    else:
        G1, G2 = base_pulses(p, t)
        if kind is ProtocolKind.CD_DIRECT:
            _, ga = mixing_angle_and_ga(p, t)
        else:
            ga = np.zeros_like(G1)
    if np.ndim(t) == 0:
        return DriveSample(float(t), float(G1), float(G2), float(ga))
    return DriveSample(t, G1, G2, ga)


def pulse_table(p: PulseParams, times) -> dict[str, np.ndarray]:
    """Original, modified and auxiliary pulses on a time grid, in units of lambda0."""
    times = np.asarray(times, dtype=float)
    G1, G2 = base_pulses(p, times)
    G1t, G2t = sap_modified_pulses(p, times)
    _, ga = mixing_angle_and_ga(p, times)
    lam = p.lambda0
    return {
        "t": times,
        "G1": G1 / lam,
        "G2": G2 / lam,
        "G1_sap": G1t / lam,
        "G2_sap": G2t / lam,
        "g_a": ga / lam,
    }
