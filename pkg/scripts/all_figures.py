"""Regenerate every figure dataset as CSV."""
import argparse
import time

from mechqst.figures import FIGURES, figure


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/figures")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("ids", nargs="*", default=list(FIGURES))
    args = ap.parse_args()
    for fig_id in args.ids:
        start = time.perf_counter()
        paths = figure(fig_id, args.out, workers=args.workers)
        print(f"{fig_id}: {', '.join(map(str, paths))} ({time.perf_counter() - start:.1f} s)")


if __name__ == "__main__":
    main()
