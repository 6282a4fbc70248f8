"""Scenario definition, single runs, sweeps and optimal-duration search."""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .dynamics import (DEFAULT_GRID_POINTS, ATOL, RTOL, IntegrationError, Model, ModelKind, ModelOptions,
                       SimulationTrace, final_fidelity, integrate_moments, trace_fidelity)
from .gaussian import GaussianState, fidelity, make_squeezed_coherent, reduce_to_mode
from .params import (TWO_PI, DerivedParams, SystemParams, derive_params, fsr_for_kappa_multiple,
                     fsr_from_length, telecom_params)
from .pulses import ProtocolKind, PulseParams


@dataclass(frozen=True)
class StateSpec:
    alpha: complex = 1.0
    r: float = 1.0
    n_bar: float = 0.0
    phase: float = 0.0

    def build(self) -> GaussianState:
        return make_squeezed_coherent(self.alpha, self.r, self.n_bar, self.phase)


@dataclass(frozen=True)
class Scenario:
    """Everything needed for one transfer simulation.

    ``kappa0_ratio`` and the two FSR rules, when set, are re-applied whenever
    ``lambda0`` changes (sweeps), so that ``kappa0 = 5 lambda0`` etc. hold.
    """
    params: SystemParams
    protocol: ProtocolKind = ProtocolKind.SAP_MODIFIED
    model: ModelKind = field(default_factory=ModelKind.single)
    T: float = 500e-9
    sigma_ratio: float = 0.1
    chi_ratio: float = 0.2
    state: StateSpec = field(default_factory=StateSpec)
    options: ModelOptions = field(default_factory=ModelOptions)
    grid_points: int = DEFAULT_GRID_POINTS
    kappa0_ratio: float | None = None
    fsr_over_kappa: float | None = None
    fsr_over_lambda0: float | None = None

    @property
    def derived(self) -> DerivedParams:
        return derive_params(self.params, self.chi_ratio)

    @property
    def pulse(self) -> PulseParams:
        return PulseParams(self.params.lambda0, self.T, self.sigma_ratio * self.T, self.chi_ratio)

    def build_model(self) -> Model:
        return Model(self.model, self.params, self.derived, self.protocol, self.pulse, self.options)

    def with_value(self, axis: str, value) -> "Scenario":
        """Copy with one sweep axis set, keeping the derived-rate rules consistent."""
        p = self.params
        if axis == "T":
            return replace(self, T=float(value))
        if axis == "protocol":
            return replace(self, protocol=ProtocolKind.parse(value))
        if axis == "n_th":
            return replace(self, params=p.replace(n_th=float(value)))
        if axis == "r":
            return replace(self, state=replace(self.state, r=float(value)))
        if axis == "alpha":
            return replace(self, state=replace(self.state, alpha=_as_complex(value)))
        if axis == "delta_fsr":
            return replace(self, params=p.replace(delta_fsr=float(value)), fsr_over_kappa=None,
                           fsr_over_lambda0=None)
        if axis == "L":
            return replace(self, params=p.replace(delta_fsr=fsr_from_length(float(value), p.fiber_light_speed)),
                           fsr_over_kappa=None, fsr_over_lambda0=None)
        if axis == "lambda0":
            return replace(self, params=p.replace(lambda0=float(value))).resolved()
        if axis == "n_fiber":
            return replace(self, model=replace(self.model, n_fiber=int(value)))
        raise KeyError(f"unknown sweep axis {axis!r}")

    def resolved(self) -> "Scenario":
        p = self.params
        if self.kappa0_ratio is not None:
            p = p.replace(kappa0=self.kappa0_ratio * p.lambda0)
        if self.fsr_over_lambda0 is not None:
            p = p.replace(delta_fsr=self.fsr_over_lambda0 * p.lambda0)
        elif self.fsr_over_kappa is not None:
            p = p.replace(delta_fsr=fsr_for_kappa_multiple(p.kappa0, self.chi_ratio * p.kappa0,
                                                           self.fsr_over_kappa))
        return replace(self, params=p)


def _as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(value[0], value[1] if len(value) > 1 else 0.0)
    return complex(value)


def default_scenario(protocol="SAP", T=500e-9, n_th=0.0, lambda0=TWO_PI * 10e6, model=None,
                   fsr_over_kappa=5.0, fsr_over_lambda0=None, **kw) -> Scenario:
    """Reference defaults: kappa0 = 5 lambda0, chi = 0.2 kappa0, |alpha=1, r=1>."""
    if fsr_over_lambda0 is not None:
        fsr_over_kappa = None
    params = telecom_params(lambda0=lambda0, fsr_over_kappa=fsr_over_kappa,
                           fsr_over_lambda0=fsr_over_lambda0, n_th=n_th)
    return Scenario(params=params, protocol=ProtocolKind.parse(protocol),
                    model=model or ModelKind.single(), T=T, kappa0_ratio=5.0,
                    fsr_over_kappa=fsr_over_kappa, fsr_over_lambda0=fsr_over_lambda0, **kw)


@dataclass
class RunResult:
    scenario: Scenario
    final_fidelity: float
    initial_fidelity: float
    trace: SimulationTrace | None
    fidelity_series: np.ndarray | None
    wall_time: float


def run_scenario(sc: Scenario, keep_trace: bool = True, tolerance_scale: float = 1.0,
                 grid_points: int | None = None) -> RunResult:
    """Integrate one scenario; fidelity is receiver vs the sender's initial state.

    ``tolerance_scale < 1`` tightens both integrator tolerances.
    """
    start = time.perf_counter()
    model = sc.build_model()
    target = sc.state.build()
    initial = model.initial_state(target)
    n = grid_points or (sc.grid_points if keep_trace else 2)
    grid = np.linspace(0.0, sc.T, n)
    trace = integrate_moments(model, initial, sc.T, grid, rtol=RTOL * tolerance_scale,
                              atol=ATOL * tolerance_scale)
    series = trace_fidelity(trace, target) if keep_trace else None
    f_final = final_fidelity(trace, target)
    f_init = fidelity(reduce_to_mode(initial, model.layout.mech_recv), target)
    return RunResult(sc, f_final, f_init, trace if keep_trace else None, series,
                     time.perf_counter() - start)


def final_fidelity_of(sc: Scenario, tolerance_scale: float = 1.0) -> float:
    return run_scenario(sc, keep_trace=False, tolerance_scale=tolerance_scale).final_fidelity


def axis_values(spec) -> list:
    """Expand a sweep-axis spec: a list, or {start, stop, num, spacing}."""
    if isinstance(spec, (list, tuple)):
        values = list(spec)
    elif isinstance(spec, dict) and "values" in spec:
        values = list(spec["values"])
    elif isinstance(spec, dict):
        num = int(spec["num"])
        if spec.get("spacing", "linear") == "log":
            values = list(np.geomspace(spec["start"], spec["stop"], num))
        else:
            values = list(np.linspace(spec["start"], spec["stop"], num))
    else:
        raise ValueError(f"bad axis specification {spec!r}")
    if not values:
        raise ValueError("sweep axis has no values")
    return values


@dataclass
class SweepRow:
    index: int
    point: dict
    fidelity: float
    status: str


def _evaluate(args):
    index, sc, point, tolerance_scale = args
    try:
        return SweepRow(index, point, final_fidelity_of(sc, tolerance_scale), "ok")
    except (IntegrationError, ValueError) as exc:
        return SweepRow(index, point, math.nan, f"error: {exc}")


def evaluate_many(scenarios, points=None, workers: int = 1, tolerance_scale: float = 1.0) -> list[SweepRow]:
    """Final fidelity of each scenario; output order matches input order."""
    scenarios = list(scenarios)
    points = points or [{} for _ in scenarios]
    tasks = [(i, sc, pt, tolerance_scale) for i, (sc, pt) in enumerate(zip(scenarios, points))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate, tasks, chunksize=1))
    else:
        rows = [_evaluate(t) for t in tasks]
    rows.sort(key=lambda r: r.index)
    return rows


def sweep(base: Scenario, axes: dict[str, list], workers: int = 1,
          tolerance_scale: float = 1.0) -> list[SweepRow]:
    """Final fidelity on the Cartesian grid of ``axes`` (first axis slowest).

    Rows come back in grid order regardless of worker scheduling.
    """
    names = list(axes)
    for a in names:
        if len(axes[a]) == 0:
            raise ValueError(f"sweep axis {a!r} is empty")
    # lambda0 first so that rules tied to it apply before explicit FSR/L values
    order = sorted(names, key=lambda a: 0 if a == "lambda0" else 1)
    scenarios, points = [], []
    for combo in itertools.product(*(axes[a] for a in names)):
        point = dict(zip(names, combo))
        sc = base
        for a in order:
            sc = sc.with_value(a, point[a])
        scenarios.append(sc)
        points.append(point)
    return evaluate_many(scenarios, points, workers, tolerance_scale)


def optimal_over_T(rows: list[SweepRow]) -> dict[tuple, tuple[float, float]]:
    """Grid-search optimum over ``T`` for every combination of the other axes."""
    best = {}
    for r in rows:
        key = tuple((a, v) for a, v in r.point.items() if a != "T")
        if math.isnan(r.fidelity):
            continue
        if key not in best or r.fidelity > best[key][1]:
            best[key] = (r.point["T"], r.fidelity)
    return best
