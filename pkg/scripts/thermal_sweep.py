"""Fidelity vs pulse duration for AP and SAP at several bath occupations."""
import argparse

import numpy as np

from mechqst.experiment import optimal_over_T, default_scenario, sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--num", type=int, default=40, help="points on the log T grid")
    ap.add_argument("--n-th", type=float, nargs="+", default=[0.0, 10.0, 100.0])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    axes = {"protocol": ["AP", "SAP"], "n_th": args.n_th,
            "T": list(np.geomspace(50e-9, 5000e-9, args.num))}
    rows = sweep(default_scenario("AP"), axes, workers=args.workers)
    for key, (T, F) in optimal_over_T(rows).items():
        d = dict(key)
        print(f"{d['protocol']:>4} n_th={d['n_th']:>5g}: best F={F:.4f} at T={T * 1e9:.0f} ns")


if __name__ == "__main__":
    main()
