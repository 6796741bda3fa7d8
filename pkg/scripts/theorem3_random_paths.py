"""Relative gap of the determinant identity over random synthesized null paths."""
import argparse

import numpy as np

from nullhelix.classify import theorem3_det
from nullhelix.paper_suite import random_null_paths


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=20240611)
    ap.add_argument("--samples", type=int, default=11)
    args = ap.parse_args()
    gaps = []
    for i, curve in enumerate(random_null_paths(args.count, args.seed, args.samples)):
        rows = [theorem3_det(curve, t) for t in curve.grid()]
        rel = max(abs(abs(r.det_numeric) - abs(r.det_formula)) / max(abs(r.det_numeric), abs(r.det_formula)) for r in rows)
        orient = {round(r.orientation) for r in rows}
        gaps.append(rel)
        print(f"path {i:2d}  rel gap {rel:.2e}  orientation {sorted(orient)}")
    print(f"worst {max(gaps):.2e}, median {np.median(gaps):.2e}")


if __name__ == "__main__":
    main()
