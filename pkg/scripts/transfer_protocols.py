"""Compare AP, SAP and CD transfer of |alpha=1, r=1> through a single-mode fiber.

Writes the fidelity time series and prints final values.
"""
import argparse
from pathlib import Path

from mechqst.config import write_csv
from mechqst.experiment import default_scenario, run_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=500e-9, help="pulse duration in seconds")
    ap.add_argument("--n-th", type=float, default=0.0)
    ap.add_argument("--out", default="out/transfer")
    args = ap.parse_args()

    results = {p: run_scenario(default_scenario(p, T=args.T, n_th=args.n_th)) for p in ("AP", "SAP", "CD")}
    for proto, res in results.items():
        print(f"{proto:>4}: final {res.final_fidelity:.4f}  initial {res.initial_fidelity:.4f}  "
              f"({res.wall_time:.2f} s)")
    t = results["AP"].trace.times
    path = write_csv(Path(args.out) / "fidelity.csv", ["t_s", "F_AP", "F_SAP", "F_CD"],
                     zip(t, *(r.fidelity_series for r in results.values())))
    print(path)


if __name__ == "__main__":
    main()
