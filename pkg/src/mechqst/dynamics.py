"""Drift/diffusion assembly and moment integration for the network models.

Mode-basis dynamics ``du/dt = -i M(t) u + noise`` are mapped to quadratures and
the first and second moments are integrated with ``dd/dt = A d`` and
``dV/dt = A V + V A^T + D``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .gaussian import GaussianState, fidelity, occupation, product_state, reduce_to_mode, symplectic_form, vacuum
from .params import DerivedParams, SystemParams
from .pulses import DriveSample, ProtocolKind, PulseParams, schedule
from .reduction import elimination_sums

RTOL = 1e-9
ATOL = 1e-12
DEFAULT_GRID_POINTS = 2001
PHYSICALITY_ERROR_TOL = 1e-6

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])
_I2 = np.eye(2)


class IntegrationError(RuntimeError):
    pass


class PhysicalityError(IntegrationError):
    def __init__(self, t, min_eig):
        super().__init__(f"state became unphysical at t={t:.6e} s (min eig {min_eig:.3e})")
        self.t = t
        self.min_eig = min_eig


class ModelType(enum.Enum):
    SINGLE_MODE_FIBER = "single"
    MULTIMODE_FIBER = "multimode"
    EFFECTIVE_SINGLE_MODE = "effective"
    FULL_RWA_CAVITIES = "full"


@dataclass(frozen=True)
class ModelKind:
    type: ModelType
    n_fiber: int = 1
    n_elim: int = 200

    def __post_init__(self):
        if self.n_fiber < 1 or self.n_fiber % 2 == 0:
            raise ValueError(f"number of fiber modes must be odd and positive, got {self.n_fiber}")
        if self.n_elim < 0:
            raise ValueError("n_elim must be non-negative")
        if self.type in (ModelType.SINGLE_MODE_FIBER, ModelType.EFFECTIVE_SINGLE_MODE) and self.n_fiber != 1:
            raise ValueError(f"{self.type.value} model has a single fiber mode")

    @classmethod
    def single(cls):
        return cls(ModelType.SINGLE_MODE_FIBER)

    @classmethod
    def multimode(cls, n: int):
        return cls(ModelType.MULTIMODE_FIBER, n_fiber=n)

    @classmethod
    def effective(cls, n_elim: int = 200):
        return cls(ModelType.EFFECTIVE_SINGLE_MODE, n_elim=n_elim)

    @classmethod
    def full(cls, n: int = 1):
        return cls(ModelType.FULL_RWA_CAVITIES, n_fiber=n)

    @property
    def label(self) -> str:
        if self.type is ModelType.MULTIMODE_FIBER or self.type is ModelType.FULL_RWA_CAVITIES:
            return f"{self.type.value}{self.n_fiber}"
        if self.type is ModelType.EFFECTIVE_SINGLE_MODE:
            return f"effective{self.n_elim}"
        return self.type.value


@dataclass(frozen=True)
class ModeLayout:
    """Ordered modes as ``(role, index)``: role in {mech, cavity, fiber}."""
    modes: tuple

    @classmethod
    def for_kind(cls, kind: ModelKind) -> "ModeLayout":
        k = (kind.n_fiber - 1) // 2
        fibers = tuple(("fiber", n) for n in range(-k, k + 1))
        if kind.type is ModelType.FULL_RWA_CAVITIES:
            modes = (("mech", 1), ("cavity", 1)) + fibers + (("cavity", 2), ("mech", 2))
        else:
            modes = (("mech", 1),) + fibers + (("mech", 2),)
        return cls(modes)

    @property
    def num_modes(self) -> int:
        return len(self.modes)

    def index(self, role: str, idx: int) -> int:
        return self.modes.index((role, idx))

    @property
    def mech_send(self) -> int:
        return self.index("mech", 1)

    @property
    def mech_recv(self) -> int:
        return self.index("mech", 2)

    def fiber_modes(self) -> list[tuple[int, int]]:
        return [(i, n) for i, (role, n) in enumerate(self.modes) if role == "fiber"]

    def names(self) -> list[str]:
        out = []
        for role, n in self.modes:
            out.append({"mech": f"m{n}", "cavity": f"c{n}"}.get(role, f"f{n:+d}" if n else "f0"))
        return out


@dataclass(frozen=True)
class ModelOptions:
    # first-principles elimination doubles the chi^2/kappa0 fiber terms
    rederived_diffusion: bool = False
    # drop every G^2/kappa0 and chi^2/kappa0 term (lossless limit)
    cavity_induced_losses: bool = True
    # same-parity fiber correlations chi^2/kappa0 in diffusion
    fiber_cross_diffusion: bool = True
    # matching same-parity dissipative fiber coupling in drift
    fiber_cross_damping: bool = True


def mode_to_quadrature_drift(M: np.ndarray) -> np.ndarray:
    """Quadrature drift for ``du/dt = -i M u``; block (j,k) is [[Im, Re], [-Re, Im]]."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"mode matrix must be square, got shape {M.shape}")
    return np.kron(M.imag, _I2) + np.kron(M.real, _J)


def mode_to_quadrature_diffusion(D: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(D, dtype=float), _I2)


# coefficient names for M(t) = sum_k c_k(t) M_k
_TERMS = ("const", "G1", "G2", "ga", "G1G1", "G2G2", "G1G2")


def _coefficients(G1, G2, ga):
    return (1.0, G1, G2, ga, G1 * G1, G2 * G2, G1 * G2)


class Model:
    """Time-dependent drift and diffusion for one scenario.

    The mode matrix is a fixed polynomial in the drives, so each coefficient
    matrix is built once and combined at every time step.
    """

    def __init__(self, kind: ModelKind, params: SystemParams, derived: DerivedParams,
                 protocol: ProtocolKind, pulse: PulseParams, options: ModelOptions = ModelOptions(),
                 drive=None):
        self.kind = kind
        self._drive = drive
        self.params = params
        self.derived = derived
        self.protocol = ProtocolKind.parse(protocol)
        self.pulse = pulse
        self.options = options
        self.layout = ModeLayout.for_kind(kind)
        M_terms, D_terms = _build_terms(kind, self.layout, params, derived, options)
        self.mode_terms = M_terms
        self.diffusion_terms = D_terms
        self._A = np.stack([mode_to_quadrature_drift(M_terms[k]) for k in _TERMS])
        self._D = np.stack([mode_to_quadrature_diffusion(D_terms[k]) for k in _TERMS])

    def drive(self, t) -> DriveSample:
        if self._drive is not None:
            return self._drive(t)
        return schedule(self.protocol, self.pulse, t)

    def mode_matrices(self, t):
        s = self.drive(t)
        c = _coefficients(s.G1, s.G2, s.g_a)
        M = sum(ci * self.mode_terms[k] for ci, k in zip(c, _TERMS))
        D = sum(ci * self.diffusion_terms[k] for ci, k in zip(c, _TERMS))
        return M, D

    def matrices(self, t):
        s = self.drive(t)
        c = np.array(_coefficients(s.G1, s.G2, s.g_a))
        return np.tensordot(c, self._A, axes=1), np.tensordot(c, self._D, axes=1)

    def initial_state(self, sender: GaussianState) -> GaussianState:
        if sender.num_modes != 1:
            raise ValueError("sender state must be single-mode")
        n = self.layout.num_modes
        states = [vacuum(1)] * n
        states[self.layout.mech_send] = sender
        return product_state(*states)


def assemble_model(kind: ModelKind, params: SystemParams, derived: DerivedParams,
                   drive: DriveSample, options: ModelOptions = ModelOptions()):
    """Quadrature drift and diffusion ``(A, D)`` for the drives in ``drive``."""
    layout = ModeLayout.for_kind(kind)
    M_terms, D_terms = _build_terms(kind, layout, params, derived, options)
    c = _coefficients(drive.G1, drive.G2, drive.g_a)
    M = sum(ci * M_terms[k] for ci, k in zip(c, _TERMS))
    D = sum(ci * D_terms[k] for ci, k in zip(c, _TERMS))
    return mode_to_quadrature_drift(M), mode_to_quadrature_diffusion(D)


def _build_terms(kind, layout, p, d, opt):
    n = layout.num_modes
    M = {k: np.zeros((n, n), dtype=complex) for k in _TERMS}
    D = {k: np.zeros((n, n)) for k in _TERMS}
    m1, m2 = layout.mech_send, layout.mech_recv
    fibers = layout.fiber_modes()

    M["const"][m1, m1] = M["const"][m2, m2] = -0.5j * p.gamma_m
    D["const"][m1, m1] = D["const"][m2, m2] = p.gamma_m * (p.n_th + 0.5)
    # direct mechanical coupling used only by the counterdiabatic drive
    M["ga"][m1, m2] = 1j
    M["ga"][m2, m1] = -1j

    if kind.type is ModelType.FULL_RWA_CAVITIES:
        c1, c2 = layout.index("cavity", 1), layout.index("cavity", 2)
        for c in (c1, c2):
            M["const"][c, c] = -1j * p.kappa0
            D["const"][c, c] = p.kappa0
        M["G1"][m1, c1] = M["G1"][c1, m1] = 1.0
        M["G2"][m2, c2] = M["G2"][c2, m2] = 1.0
        for i, nf in fibers:
            M["const"][i, i] = nf * p.delta_fsr - 1j * p.gamma_f
            D["const"][i, i] = p.gamma_f
            for c, sign in ((c1, 1.0), (c2, (-1.0) ** nf)):
                M["const"][c, i] = -1j * d.chi * sign
                M["const"][i, c] = 1j * d.chi * sign
        return M, D

    loss = 1.0 if opt.cavity_induced_losses else 0.0
    factor = 2.0 if opt.rederived_diffusion else 1.0
    fiber_extra = loss * factor * d.chi**2 / p.kappa0
    gamma_ft = p.gamma_f + fiber_extra
    rho = d.chi / p.kappa0

    M["G1G1"][m1, m1] = -1j * loss / p.kappa0
    M["G2G2"][m2, m2] = -1j * loss / p.kappa0
    D["G1G1"][m1, m1] = loss / p.kappa0
    D["G2G2"][m2, m2] = loss / p.kappa0
    for i, nf in fibers:
        M["const"][i, i] = nf * p.delta_fsr - 1j * gamma_ft
        D["const"][i, i] = gamma_ft
        M["G1"][m1, i] = M["G1"][i, m1] = rho
        M["G2"][m2, i] = M["G2"][i, m2] = rho * (-1.0) ** nf
        for j, nf2 in fibers:
            if j != i and (nf - nf2) % 2 == 0:
                if opt.fiber_cross_diffusion:
                    D["const"][i, j] = fiber_extra
                if opt.fiber_cross_damping:
                    M["const"][i, j] = -1j * fiber_extra

    if kind.type is ModelType.EFFECTIVE_SINGLE_MODE and kind.n_elim > 0:
        s_direct, s_alt = elimination_sums(gamma_ft, p.delta_fsr, kind.n_elim)
        c11 = gamma_ft * rho**2 * s_direct
        c12 = gamma_ft * rho**2 * s_alt
        M["G1G1"][m1, m1] += -1j * c11
        M["G2G2"][m2, m2] += -1j * c11
        M["G1G2"][m1, m2] = M["G1G2"][m2, m1] = -1j * c12
        D["G1G1"][m1, m1] += c11
        D["G2G2"][m2, m2] += c11
        D["G1G2"][m1, m2] = D["G1G2"][m2, m1] = c12
    return M, D


def _pack_index(n):
    return np.triu_indices(n)


@dataclass
class SimulationTrace:
    times: np.ndarray
    d: np.ndarray  # (n_t, 2N)
    V: np.ndarray  # (n_t, 2N, 2N)
    layout: ModeLayout
    min_physical_eig: np.ndarray = field(default=None)
    n_rhs_evals: int = 0

    def state(self, i: int) -> GaussianState:
        return GaussianState(self.d[i], self.V[i])

    @property
    def final_state(self) -> GaussianState:
        return self.state(-1)

    def occupations(self) -> np.ndarray:
        """Mean occupation of every mode at every grid point, shape (n_t, N)."""
        diag = np.diagonal(self.V, axis1=1, axis2=2)
        q2 = diag[:, 0::2] + diag[:, 1::2]
        d2 = self.d[:, 0::2] ** 2 + self.d[:, 1::2] ** 2
        return 0.5 * (q2 - 1.0) + 0.5 * d2


def integrate_moments(model: Model, initial: GaussianState, T: float, output_grid=None,
                      rtol: float = RTOL, atol: float = ATOL,
                      check_physical: bool = True) -> SimulationTrace:
    """Integrate first and second moments over ``[0, T]``.

    The covariance is carried as its upper triangle, so it stays exactly
    symmetric. Embedded 8(5,3) Runge-Kutta with dense output at the grid.
    """
    if output_grid is None:
        output_grid = np.linspace(0.0, T, DEFAULT_GRID_POINTS)
    grid = np.asarray(output_grid, dtype=float)
    if grid[0] < 0 or grid[-1] > T * (1 + 1e-12) or np.any(np.diff(grid) <= 0):
        raise ValueError("output grid must be increasing within [0, T]")
    if not initial.is_physical():
        raise ValueError("initial state is unphysical")
    n2 = initial.d.size
    if n2 != 2 * model.layout.num_modes:
        raise ValueError("initial state does not match the model layout")
    iu = _pack_index(n2)

    def unpack(v):
        V = np.zeros((n2, n2))
        V[iu] = v
        return V + V.T - np.diag(np.diag(V))

    def rhs(t, y):
        A, D = model.matrices(t)
        V = unpack(y[n2:])
        P = A @ V
        dV = P + P.T + D
        return np.concatenate((A @ y[:n2], dV[iu]))

    y0 = np.concatenate((initial.d, initial.V[iu]))
    sol = solve_ivp(rhs, (0.0, float(T)), y0, method="DOP853", t_eval=grid, rtol=rtol, atol=atol)
    if sol.status != 0:
        raise IntegrationError(f"integration failed: {sol.message}")
    ys = sol.y.T
    d = ys[:, :n2].copy()
    V = np.empty((len(grid), n2, n2))
    for k, y in enumerate(ys):
        V[k] = unpack(y[n2:])
    trace = SimulationTrace(sol.t, d, V, model.layout, n_rhs_evals=sol.nfev)
    if check_physical:
        Om = 1j * symplectic_form(n2 // 2)
        mins = np.linalg.eigvalsh(V + Om)[:, 0]
        trace.min_physical_eig = mins
        bad = np.nonzero(mins < -PHYSICALITY_ERROR_TOL)[0]
        if bad.size:
            raise PhysicalityError(float(sol.t[bad[0]]), float(mins[bad[0]]))
    return trace


def trace_fidelity(trace: SimulationTrace, target: GaussianState) -> np.ndarray:
    k = trace.layout.mech_recv
    return np.array([fidelity(reduce_to_mode(trace.state(i), k), target)
                     for i in range(len(trace.times))])


def final_fidelity(trace: SimulationTrace, target: GaussianState) -> float:
    return fidelity(reduce_to_mode(trace.final_state, trace.layout.mech_recv), target)


__all__ = [
    "IntegrationError", "Model", "ModelKind", "ModelOptions", "ModelType", "ModeLayout",
    "PhysicalityError", "SimulationTrace", "assemble_model", "final_fidelity",
    "integrate_moments", "mode_to_quadrature_drift", "occupation", "trace_fidelity",
]
