import csv

import pytest

from mechqst.experiment import SweepRow
from mechqst.figures import FIGURES, _write_optimal, fig_4b, fig_6c, figure


def _read(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_optimal_table(tmp_path):
    axes = {"protocol": ["AP"], "n_th": [0.0], "T": [1e-7, 2e-7, 3e-7]}
    rows = [SweepRow(i, {"protocol": "AP", "n_th": 0.0, "T": T}, F, "ok")
            for i, (T, F) in enumerate(zip(axes["T"], (0.3, 0.5, 0.4)))]
    rows.append(SweepRow(3, {"protocol": "AP", "n_th": 0.0, "T": 4e-7}, float("nan"), "error: x"))
    table = _read(_write_optimal(tmp_path / "opt.csv", rows, axes))
    assert table[0] == ["protocol", "n_th", "T_opt_s", "fidelity_opt", "T_grid_min_s", "T_grid_max_s",
                        "T_grid_num"]
    assert table[1][:4] == ["AP", "0", "2e-07", "0.5"]


def test_small_grid_presets(tmp_path):
    rows = _read(fig_4b(tmp_path, T_grid=(500e-9,))[0])
    assert len(rows) == 4
    rows = _read(fig_6c(tmp_path, lengths=(1.0,), T_grid=(500e-9, 1000e-9))[0])
    assert len(rows) == 5
    assert {r[1] for r in rows[1:]} == {"AP", "SAP"}


def test_unknown_figure_id(tmp_path):
    assert "6c" in FIGURES
    with pytest.raises(KeyError):
        figure("7", tmp_path)
