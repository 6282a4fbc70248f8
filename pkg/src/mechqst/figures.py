"""Presets that regenerate each figure dataset as CSV."""
from __future__ import annotations

import math
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import write_csv
from .dynamics import ModelKind
from .experiment import evaluate_many, final_fidelity_of, optimal_over_T, default_scenario, run_scenario, sweep
from .params import TWO_PI, fsr_from_length
from .pulses import PulseParams, pulse_table
from .reduction import truncation_error

FIGURES = ("2a", "2b", "3a", "3b", "4a", "4b", "5", "6a", "6b", "6c")

T_GRID = tuple(np.geomspace(50e-9, 5000e-9, 40))
T_GRID_20 = tuple(np.geomspace(50e-9, 5000e-9, 20))
FSR_RATIOS = (0.5, 1.0, 2.0)
FIG5_MODES = {0.5: 13, 1.0: 9, 2.0: 5}
FIG6_LAMBDAS_MHZ = (5.0, 10.0, 20.0, 50.0)
# lambda0 follows delta_fsr / 2 along the length grid
FIG6C_LENGTHS = tuple(np.geomspace(1.0, 30.0, 8))
FIG6C_NTH = (0.0, 10.0)
ADAPTIVE_TARGET = 0.01
MAX_FIBER_MODES = 21


def figure(fig_id: str, out_dir, workers: int = 1) -> list[Path]:
    if fig_id not in FIGURES:
        raise KeyError(f"unknown figure {fig_id!r}; expected one of {', '.join(FIGURES)}")
    out = Path(out_dir)
    fn = globals()["fig_" + fig_id]
    return fn(out, workers)


def fig_2a(out, workers=1):
    p = PulseParams(TWO_PI * 10e6, 500e-9)
    tab = pulse_table(p, np.linspace(0.0, p.T, 1001))
    keys = list(tab)
    return [write_csv(out / "fig2a_pulses.csv", ["t_s"] + [f"{k}_over_lambda0" for k in keys[1:]],
                      zip(*(tab[k] for k in keys)))]


def fig_2b(out, workers=1):
    series = {}
    for proto in ("AP", "SAP", "CD"):
        res = run_scenario(default_scenario(proto))
        series[proto] = res
    t = series["AP"].trace.times
    rows = zip(t, *(series[k].fidelity_series for k in series))
    return [write_csv(out / "fig2b_fidelity.csv", ["t_s", "F_AP", "F_SAP", "F_CD"], rows)]


def _protocol_grid(out, name, axes, base, workers):
    rows = sweep(base, axes, workers=workers)
    names = list(axes)
    header = [_axis_header(a) for a in names] + ["fidelity", "status"]
    body = ([_axis_out(a, r.point[a]) for a in names] + [r.fidelity, r.status] for r in rows)
    return rows, write_csv(out / name, header, body)


def _axis_header(a):
    return {"T": "T_s", "lambda0": "lambda0_over_2pi_Hz", "delta_fsr": "delta_fsr_over_2pi_Hz",
            "L": "L_m"}.get(a, a)


def _axis_out(a, v):
    return v / TWO_PI if a in ("lambda0", "delta_fsr") else v


def fig_3a(out, workers=1):
    axes = {"protocol": ["AP", "SAP"], "n_th": [0.0, 10.0, 100.0], "T": list(T_GRID)}
    rows, path = _protocol_grid(out, "fig3a_fidelity_vs_T.csv", axes, default_scenario("AP"), workers)
    return [path, _write_optimal(out / "fig3a_optimal.csv", rows, axes)]


def fig_3b(out, workers=1):
    lambdas = list(TWO_PI * np.geomspace(1e6, 100e6, 40))
    axes = {"protocol": ["AP", "SAP"], "n_th": [0.0, 10.0, 100.0], "lambda0": lambdas}
    _, path = _protocol_grid(out, "fig3b_fidelity_vs_lambda0.csv", axes,
                             default_scenario("AP", T=1000e-9), workers)
    return [path]


def _write_optimal(path, rows, axes):
    best = optimal_over_T(rows)
    others = [a for a in axes if a != "T"]
    T = axes["T"]
    body = ([*(_axis_out(a, v) for a, v in key), t_opt, f_opt, min(T), max(T), len(T)]
            for key, (t_opt, f_opt) in best.items())
    return write_csv(path, [_axis_header(a) for a in others] + ["T_opt_s", "fidelity_opt", "T_grid_min_s",
                                                                "T_grid_max_s", "T_grid_num"], body)


def truncation_table(fsr_ratio: float, T: float = 2000e-9, n_max: int = 15, workers: int = 1):
    """Fidelity and relative error for N = 1, 3, ..., n_max fiber modes (AP, n_th = 0)."""
    Ns = list(range(1, n_max + 1, 2))
    scs = [default_scenario("AP", T=T, fsr_over_lambda0=fsr_ratio, model=ModelKind.multimode(N)) for N in Ns]
    F = {N: r.fidelity for N, r in zip(Ns, evaluate_many(scs, workers=workers))}
    return F, truncation_error(F)


def fig_4a(out, workers=1):
    body = []
    for ratio in FSR_RATIOS:
        F, eps = truncation_table(ratio, workers=workers)
        body += [[ratio, N, F[N], eps.get(N, math.nan)] for N in sorted(F)]
    return [write_csv(out / "fig4a_truncation_error.csv",
                      ["delta_fsr_over_lambda0", "N", "fidelity", "epsilon_N"], body)]


def adaptive_multimode_fidelity(sc, target=ADAPTIVE_TARGET, n_max=MAX_FIBER_MODES):
    """Add fiber-mode pairs until the relative error drops below ``target``.

    Returns ``(fidelity, N)``; ``N = n_max`` if the target was not reached.
    """
    prev = final_fidelity_of(replace(sc, model=ModelKind.multimode(1)))
    N = 1
    while N < n_max:
        N += 2
        cur = final_fidelity_of(replace(sc, model=ModelKind.multimode(N)))
        eps = 2 * abs(cur - prev) / (cur + prev)
        prev = cur
        if eps < target:
            break
    return prev, N


def fig_4b(out, workers=1, T_grid=T_GRID_20):
    body = []
    for ratio in FSR_RATIOS:
        for T in T_grid:
            sc = default_scenario("AP", T=T, fsr_over_lambda0=ratio)
            F, N = adaptive_multimode_fidelity(sc)
            F_eff = final_fidelity_of(replace(sc, model=ModelKind.effective()))
            body.append([ratio, T, N, 1 - F, 1 - F_eff])
    return [write_csv(out / "fig4b_infidelity.csv",
                      ["delta_fsr_over_lambda0", "T_s", "N", "infidelity_multimode", "infidelity_effective"],
                      body)]


def fig_5(out, workers=1, T_grid=T_GRID):
    scs, pts = [], []
    for ratio in FSR_RATIOS:
        for T in T_grid:
            base = default_scenario("AP", T=T, fsr_over_lambda0=ratio)
            for label, model in (("multimode", ModelKind.multimode(FIG5_MODES[ratio])),
                                 ("effective", ModelKind.effective())):
                scs.append(replace(base, model=model))
                pts.append({"ratio": ratio, "T": T, "model": label})
    rows = evaluate_many(scs, pts, workers=workers)
    F = {(r.point["ratio"], r.point["T"], r.point["model"]): r.fidelity for r in rows}
    body = [[ratio, FIG5_MODES[ratio], T, 1 - F[(ratio, T, "multimode")], 1 - F[(ratio, T, "effective")]]
            for ratio in FSR_RATIOS for T in T_grid]
    return [write_csv(out / "fig5_multimode_vs_effective.csv",
                      ["delta_fsr_over_lambda0", "N", "T_s", "infidelity_multimode", "infidelity_effective"],
                      body)]


def _fig6ab(out, protocol, name, workers):
    axes = {"lambda0": [TWO_PI * 1e6 * x for x in FIG6_LAMBDAS_MHZ], "T": list(T_GRID)}
    base = default_scenario(protocol, n_th=10.0, fsr_over_lambda0=2.0, model=ModelKind.effective())
    rows = sweep(base, axes, workers=workers)
    body = ([r.point["lambda0"] / TWO_PI, r.point["T"], 1 - r.fidelity, r.status] for r in rows)
    return [write_csv(out / name, ["lambda0_over_2pi_Hz", "T_s", "infidelity", "status"], body)]


def fig_6a(out, workers=1):
    return _fig6ab(out, "AP", "fig6a_effective_AP.csv", workers)


def fig_6b(out, workers=1):
    return _fig6ab(out, "SAP", "fig6b_effective_SAP.csv", workers)


def fig_6c(out, workers=1, lengths=FIG6C_LENGTHS, T_grid=T_GRID_20):
    """Optimal infidelity vs fiber length at fixed delta_fsr = 2 lambda0."""
    scs, pts = [], []
    for n_th in FIG6C_NTH:
        for proto in ("AP", "SAP"):
            for L in lengths:
                lam = fsr_from_length(L) / 2.0
                for T in T_grid:
                    scs.append(default_scenario(proto, T=T, n_th=n_th, lambda0=lam, fsr_over_lambda0=2.0,
                                              model=ModelKind.effective()))
                    pts.append({"n_th": n_th, "protocol": proto, "L": L, "T": T})
    rows = evaluate_many(scs, pts, workers=workers)
    best = optimal_over_T(rows)
    body = [[dict(k)["n_th"], dict(k)["protocol"], dict(k)["L"], fsr_from_length(dict(k)["L"]) / 2 / TWO_PI,
             t_opt, 1 - f] for k, (t_opt, f) in best.items()]
    return [write_csv(out / "fig6c_optimal_vs_length.csv",
                      ["n_th", "protocol", "L_m", "lambda0_over_2pi_Hz", "T_opt_s", "min_infidelity"], body)]
