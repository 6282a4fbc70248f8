"""JSON scenario configuration and CSV output."""
from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .dynamics import ModelKind, ModelOptions, ModelType
from .experiment import Scenario, StateSpec, axis_values
from .params import DEFAULT_LIGHT_SPEED, TWO_PI, SystemParams, fsr_for_kappa_multiple, fsr_from_length
from .pulses import ProtocolKind

FREQUENCY_KEYS = ("omega_m", "gamma_m", "omega_c", "lambda0", "kappa0", "gamma_f", "delta_fsr")
FREQUENCY_AXES = ("lambda0", "delta_fsr")
SWEEP_AXES = ("T", "lambda0", "n_th", "alpha", "r", "delta_fsr", "L", "protocol", "n_fiber")

TABLE1_HZ = {
    "omega_m": 1e9,
    "gamma_m": 1e3,
    "omega_c": 193e12,
    "lambda0": 10e6,
    "gamma_f": 1.5e3,
}


class ConfigError(ValueError):
    pass


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _unit_scale(cfg) -> float:
    units = cfg.get("units", "Hz")
    if units in ("Hz", "hz"):
        return TWO_PI
    if units in ("rad/s", "rad_per_s"):
        return 1.0
    raise ConfigError(f"units must be 'Hz' or 'rad/s', got {units!r}")


def parse_scenario(cfg: dict) -> Scenario:
    """Build a Scenario from a config dict; frequencies in Hz get the 2 pi factor."""
    try:
        return _parse(cfg)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _parse(cfg: dict) -> Scenario:
    scale = _unit_scale(cfg)
    raw = dict(cfg.get("params", {}))
    unknown = set(raw) - set(FREQUENCY_KEYS) - {
        "n_th", "fiber_light_speed", "kappa0_over_lambda0", "delta_fsr_over_kappa",
        "delta_fsr_over_lambda0", "fiber_length"}
    if unknown:
        raise ConfigError(f"unknown parameter(s): {sorted(unknown)}")
    chi_ratio = float(cfg.get("chi_ratio", 0.2))
    values = {k: TABLE1_HZ[k] * TWO_PI for k in TABLE1_HZ}
    for k in FREQUENCY_KEYS:
        if k in raw:
            values[k] = float(raw[k]) * scale
    light = float(raw.get("fiber_light_speed", DEFAULT_LIGHT_SPEED))
    kappa0_ratio = raw.get("kappa0_over_lambda0")
    if "kappa0" not in values:
        kappa0_ratio = 5.0 if kappa0_ratio is None else float(kappa0_ratio)
        values["kappa0"] = kappa0_ratio * values["lambda0"]
    elif kappa0_ratio is not None:
        raise ConfigError("give either kappa0 or kappa0_over_lambda0")
    fsr_rules = [k for k in ("delta_fsr", "delta_fsr_over_kappa", "delta_fsr_over_lambda0", "fiber_length")
                 if k in raw]
    if len(fsr_rules) > 1:
        raise ConfigError(f"conflicting FSR specifications: {fsr_rules}")
    over_kappa = over_lambda = None
    rule = fsr_rules[0] if fsr_rules else "delta_fsr_over_kappa"
    if rule == "delta_fsr_over_kappa":
        over_kappa = float(raw.get(rule, 5.0))
        values["delta_fsr"] = fsr_for_kappa_multiple(values["kappa0"], chi_ratio * values["kappa0"], over_kappa)
    elif rule == "delta_fsr_over_lambda0":
        over_lambda = float(raw[rule])
        values["delta_fsr"] = over_lambda * values["lambda0"]
    elif rule == "fiber_length":
        values["delta_fsr"] = fsr_from_length(float(raw[rule]), light)
    params = SystemParams(n_th=float(raw.get("n_th", 0.0)), fiber_light_speed=light, **values)

    model_cfg = cfg.get("model", {"kind": "single"})
    try:
        mtype = ModelType(model_cfg.get("kind", "single"))
    except ValueError as exc:
        raise ConfigError(f"unknown model kind {model_cfg.get('kind')!r}") from exc
    model = ModelKind(mtype, n_fiber=int(model_cfg.get("n_fiber_modes", 1)),
                      n_elim=int(model_cfg.get("n_elim", 200)))

    pulse = cfg.get("pulse", {})
    T = float(pulse.get("T", 500e-9))
    state_cfg = cfg.get("state", {})
    alpha = state_cfg.get("alpha", [1.0, 0.0])
    alpha = complex(*alpha) if isinstance(alpha, list) else complex(alpha)
    state = StateSpec(alpha=alpha, r=float(state_cfg.get("r", 1.0)),
                      n_bar=float(state_cfg.get("n_bar", 0.0)),
                      phase=float(state_cfg.get("squeeze_phase", 0.0)))
    opts = cfg.get("options", {})
    bad = set(opts) - set(ModelOptions.__dataclass_fields__)
    if bad:
        raise ConfigError(f"unknown option(s): {sorted(bad)}")
    try:
        protocol = ProtocolKind.parse(cfg.get("protocol", "SAP"))
    except ValueError as exc:
        raise ConfigError(f"unknown protocol {cfg.get('protocol')!r}") from exc
    return Scenario(
        params=params,
        protocol=protocol,
        model=model,
        T=T,
        sigma_ratio=float(pulse.get("sigma_ratio", 0.1)),
        chi_ratio=chi_ratio,
        state=state,
        options=ModelOptions(**{k: bool(v) for k, v in opts.items()}),
        grid_points=int(cfg.get("grid_points", 2001)),
        kappa0_ratio=kappa0_ratio,
        fsr_over_kappa=over_kappa,
        fsr_over_lambda0=over_lambda,
    )


def parse_sweep(cfg: dict) -> tuple[dict[str, list], bool]:
    """Sweep axes (values in internal units) and whether to report optimal T."""
    sw = cfg.get("sweep")
    if not sw or not sw.get("axes"):
        raise ConfigError("config has no sweep section")
    scale = _unit_scale(cfg)
    axes = {}
    for name, spec in sw["axes"].items():
        if name not in SWEEP_AXES:
            raise ConfigError(f"unknown sweep axis {name!r}")
        try:
            values = axis_values(spec)
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"axis {name}: {exc}") from exc
        if name in FREQUENCY_AXES:
            values = [float(v) * scale for v in values]
        axes[name] = values
    optimize = bool(sw.get("optimize_T", False))
    if optimize and "T" not in axes:
        raise ConfigError("optimize_T requires a T axis")
    return axes, optimize


def is_sweep(cfg: dict) -> bool:
    return "sweep" in cfg


def fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, complex):
        return f"{value.real:.12g}{value.imag:+.12g}j"
    if isinstance(value, (float, np.floating)):
        return "nan" if math.isnan(value) else f"{value:.12g}"
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def write_csv(path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def write_trace_csv(path, result) -> Path:
    trace = result.trace
    occ = trace.occupations()
    header = ["t_s", "fidelity"] + [f"occ_{n}" for n in trace.layout.names()]
    rows = ([t, f, *o] for t, f, o in zip(trace.times, result.fidelity_series, occ))
    return write_csv(path, header, rows)


def derived_record(derived) -> dict:
    return {k: float(v) for k, v in asdict(derived).items()}
