"""Gaussian states in the (q1, p1, ..., qN, pN) ordering with vacuum variance 1/2."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SYMMETRY_TOL = 1e-12
PHYSICAL_TOL = 1e-9

OMEGA_1 = 0.5 * np.array([[0.0, 1.0], [-1.0, 0.0]])


class UnphysicalStateError(ValueError):
    pass


def symplectic_form(num_modes: int) -> np.ndarray:
    return np.kron(np.eye(num_modes), OMEGA_1)


def rotation(phase: float) -> np.ndarray:
    c, s = np.cos(phase), np.sin(phase)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True, eq=False)
class GaussianState:
    d: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float).reshape(-1)
        V = np.asarray(self.V, dtype=float)
        if d.size % 2 or V.shape != (d.size, d.size):
            raise ValueError(f"shape mismatch: d {d.shape}, V {V.shape}")
        if np.max(np.abs(V - V.T), initial=0.0) > SYMMETRY_TOL * max(1.0, np.max(np.abs(V))):
            raise ValueError("covariance matrix is not symmetric")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "V", V)

    @property
    def num_modes(self) -> int:
        return self.d.size // 2

    def min_physical_eigenvalue(self) -> float:
        """Smallest eigenvalue of V + i Omega; non-negative for physical states."""
        return min_physical_eigenvalue(self.V)

    def is_physical(self, tol: float = PHYSICAL_TOL) -> bool:
        return self.min_physical_eigenvalue() >= -tol

    def rotated(self, phase: float) -> "GaussianState":
        """Apply the same phase-space rotation to every mode."""
        R = np.kron(np.eye(self.num_modes), rotation(phase))
        return GaussianState(R @ self.d, R @ self.V @ R.T)


def min_physical_eigenvalue(V: np.ndarray) -> float:
    n = V.shape[0] // 2
    return float(np.linalg.eigvalsh(V + 1j * symplectic_form(n))[0])


def vacuum(num_modes: int = 1) -> GaussianState:
    return GaussianState(np.zeros(2 * num_modes), 0.5 * np.eye(2 * num_modes))


def make_squeezed_coherent(alpha: complex = 0.0, r: float = 0.0, n_bar: float = 0.0,
                           phase: float = 0.0) -> GaussianState:
    """Displaced, squeezed thermal state; r > 0 squeezes q when ``phase`` is 0.

    ``phase`` rotates the squeezing ellipse only, the displacement stays at
    ``sqrt(2) * (Re alpha, Im alpha)``.
    """
    if n_bar < 0:
        raise ValueError("thermal occupation must be non-negative")
    alpha = complex(alpha)
    d = np.sqrt(2.0) * np.array([alpha.real, alpha.imag])
    V = (n_bar + 0.5) * np.diag([np.exp(-2.0 * r), np.exp(2.0 * r)])
    if phase:
        R = rotation(phase)
        V = R @ V @ R.T
        V = 0.5 * (V + V.T)
    return GaussianState(d, V)


def fidelity(s1: GaussianState, s2: GaussianState) -> float:
    """Square-root fidelity of two single-mode Gaussian states.

    Equals |<psi1|psi2>| for pure states.
    """
    if s1.num_modes != 1 or s2.num_modes != 1:
        raise ValueError("fidelity is only defined for single-mode states")
    det1 = np.linalg.det(s1.V)
    det2 = np.linalg.det(s2.V)
    lam = 4.0 * (det1 - 0.25) * (det2 - 0.25)
    if det1 < 0.25 - PHYSICAL_TOL or det2 < 0.25 - PHYSICAL_TOL:
        raise UnphysicalStateError(f"unphysical input: det V = {det1!r}, {det2!r}")
    # roundoff near pure states
    lam = max(lam, 0.0)
    S = s1.V + s2.V
    upsilon = np.linalg.det(S)
    if not upsilon > 0:
        raise np.linalg.LinAlgError("V1 + V2 is singular")
    dd = s2.d - s1.d
    exponent = -0.25 * dd @ np.linalg.solve(S, dd)
    f0_sq = 1.0 / (np.sqrt(upsilon + lam) - np.sqrt(lam))
    return float(np.sqrt(f0_sq) * np.exp(exponent))


def _check_mode(s: GaussianState, k: int) -> None:
    if not 0 <= k < s.num_modes:
        raise IndexError(f"mode index {k} out of range for {s.num_modes} modes")


def occupation(s: GaussianState, k: int) -> float:
    _check_mode(s, k)
    i = 2 * k
    return float(0.5 * (s.V[i, i] + s.V[i + 1, i + 1] - 1.0)
                 + 0.5 * (s.d[i] ** 2 + s.d[i + 1] ** 2))


def reduce_to_mode(s: GaussianState, k: int) -> GaussianState:
    _check_mode(s, k)
    i = 2 * k
    return GaussianState(s.d[i:i + 2].copy(), s.V[i:i + 2, i:i + 2].copy())


def product_state(*states: GaussianState) -> GaussianState:
    d = np.concatenate([s.d for s in states])
    n = d.size
    V = np.zeros((n, n))
    i = 0
    for s in states:
        m = s.d.size
        V[i:i + m, i:i + m] = s.V
        i += m
    return GaussianState(d, V)


def two_mode_squeezed(s: float) -> GaussianState:
    c, sh = np.cosh(2 * s), np.sinh(2 * s)
    Z = np.diag([1.0, -1.0])
    V = 0.5 * np.block([[c * np.eye(2), sh * Z], [sh * Z, c * np.eye(2)]])
    return GaussianState(np.zeros(4), V)
