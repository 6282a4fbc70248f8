"""Elimination of the off-resonant fiber modes and truncation diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import DerivedParams, SystemParams

INCREMENT_TOL = 1e-12


def _f(x, a, b):
    return 1.0 / (a * a + b * b * x * x)


def _df(x, a, b):
    u = a * a + b * b * x * x
    return -2.0 * b * b * x / u**2


def _d3f(x, a, b):
    u = a * a + b * b * x * x
    return 24.0 * b**4 * x / u**3 - 48.0 * b**6 * x**3 / u**4


def _tail_direct(N, a, b):
    """Euler-Maclaurin estimate of sum_{n>N} 1/(a^2 + n^2 b^2)."""
    integral = math.atan(a / (b * N)) / (a * b) if a > 0 else 1.0 / (b * b * N)
    return integral - 0.5 * _f(N, a, b) - _df(N, a, b) / 12.0 + _d3f(N, a, b) / 720.0


def _tail_alternating(N, a, b):
    """Boole summation estimate of sum_{n>N} (-1)^n / (a^2 + n^2 b^2)."""
    m = N + 1
    return (-1.0) ** m * (0.5 * _f(m, a, b) - 0.25 * _df(m, a, b) + _d3f(m, a, b) / 48.0)


def elimination_sums(a: float, b: float, n_elim: int | None = 200) -> tuple[float, float]:
    """``(sum, alternating sum)`` of ``1/(a^2 + n^2 b^2)`` over ``1 <= |n| <= n_elim``.

    Summation stops early once the relative increment drops below 1e-12.
    ``n_elim=None`` gives the infinite series via a tail correction after
    200 explicit terms.
    """
    if b <= 0 or a < 0:
        raise ValueError("need a >= 0 and b > 0")
    limit = 200 if n_elim is None else int(n_elim)
    direct = alt = 0.0
    n_used = 0
    for n in range(1, limit + 1):
        term = _f(n, a, b)
        direct += term
        alt += term if n % 2 == 0 else -term
        n_used = n
        if term < INCREMENT_TOL * direct:
            break
    if n_elim is None:
        direct += _tail_direct(n_used, a, b)
        alt += _tail_alternating(n_used, a, b)
    return 2.0 * direct, 2.0 * alt


@dataclass(frozen=True)
class EffectiveModel:
    gamma11: float
    gamma22: float
    gamma12: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.gamma11, self.gamma12], [self.gamma12, self.gamma22]])

    @property
    def diffusion_addition(self) -> np.ndarray:
        """Extra mechanical diffusion, applied on matching quadratures."""
        return self.matrix()


def gamma_matrix(params: SystemParams, derived: DerivedParams, G1: float, G2: float,
                 n_elim: int | None = 200, gamma_f_tilde: float | None = None) -> EffectiveModel:
    """Fiber-induced mechanical damping and cross damping."""
    gft = derived.gamma_f_tilde if gamma_f_tilde is None else gamma_f_tilde
    rho = derived.chi / params.kappa0
    g1, g2 = rho * G1, rho * G2
    s_direct, s_alt = elimination_sums(gft, params.delta_fsr, n_elim)
    # g_{1,n} g_{2,n} carries (-1)^n; frequency shifts are odd in n and cancel
    return EffectiveModel(gft * g1 * g1 * s_direct, gft * g2 * g2 * s_direct, gft * g1 * g2 * s_alt)


def frequency_shift_residual(params: SystemParams, derived: DerivedParams, G1: float,
                             n_elim: int = 200) -> float:
    """Net Lamb-type shift of mode 1 from the symmetric sum; zero by n -> -n symmetry."""
    rho = derived.chi / params.kappa0
    a, b = derived.gamma_f_tilde, params.delta_fsr
    n = np.concatenate([np.arange(-n_elim, 0), np.arange(1, n_elim + 1)]).astype(float)
    return float(np.sum((rho * G1) ** 2 * n * b / (a * a + n * n * b * b)))


def effective_dynamics(params, derived, protocol, pulse, n_elim: int = 200, options=None):
    """Three-mode model with every fiber mode except f0 eliminated."""
    from .dynamics import Model, ModelKind, ModelOptions

    return Model(ModelKind.effective(n_elim), params, derived, protocol, pulse,
                 options or ModelOptions())


def truncation_error(fidelities: dict[int, float]) -> dict[int, float]:
    """Relative change of the fidelity when two more fiber modes are included."""
    out = {}
    for N in sorted(fidelities):
        if N < 3:
            continue
        if N - 2 not in fidelities:
            raise KeyError(f"missing fidelity for N={N - 2}")
        a, b = fidelities[N], fidelities[N - 2]
        out[N] = 2.0 * abs(a - b) / (a + b)
    return out


def fiber_coupling_diagnostic(params: SystemParams, derived: DerivedParams, n_max: int = 1) -> float:
    """Largest ratio of cavity-induced fiber coupling to mode spacing."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    coupling = derived.chi**2 / params.kappa0
    return max(coupling / (n * params.delta_fsr) for n in range(1, n_max + 1))
