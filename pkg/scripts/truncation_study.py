"""Relative change of the final fidelity as fiber-mode pairs are added."""
import argparse

from mechqst.figures import FSR_RATIOS, truncation_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=2000e-9)
    ap.add_argument("--n-max", type=int, default=15)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    for ratio in FSR_RATIOS:
        F, eps = truncation_table(ratio, T=args.T, n_max=args.n_max, workers=args.workers)
        cells = "  ".join(f"N={N}: {eps[N]:.1e}" for N in sorted(eps))
        print(f"delta_fsr = {ratio} lambda0 | F_1 = {F[1]:.4f} | {cells}")


if __name__ == "__main__":
    main()
