"""Cavity-resolved model vs the eliminated single-mode model at large cavity decay."""
import argparse
from dataclasses import replace

from mechqst.dynamics import ModelKind
from mechqst.experiment import final_fidelity_of, default_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kappa0-ratio", type=float, nargs="+", default=[5.0, 20.0, 50.0])
    args = ap.parse_args()

    for ratio in args.kappa0_ratio:
        for proto in ("AP", "SAP", "CD"):
            base = replace(default_scenario(proto), kappa0_ratio=ratio).resolved()
            single = final_fidelity_of(base)
            full = final_fidelity_of(replace(base, model=ModelKind.full(1)))
            print(f"kappa0={ratio:>4g} lambda0 {proto:>4}: single {single:.4f}  full {full:.4f}")


if __name__ == "__main__":
    main()
