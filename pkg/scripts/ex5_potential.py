"""Compare the printed and corrected potentials of the 4-dimensional nilpotent example.

For each level t = c the script samples points of the orbit {t = c} and
reports the worst relative error of each potential against the orbit metric.
"""
import argparse

import numpy as np

from hessalg import catalog as cat
from hessalg import hessdual as hd


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=float, nargs="+", default=[-2.0, -0.5, 0.5, 1.0, 2.0, 3.0])
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=0)
    args = ap.parse_args()

    A = cat.ex5_algebra()
    rng = np.random.default_rng(args.seed)
    candidates = {"printed": cat.ex5_potential_published(), "corrected": cat.ex5_potential_corrected()}
    print(f"{'t':>6}  " + "  ".join(f"{k:>12}" for k in candidates))
    for c in args.levels:
        pts = [np.array([*rng.uniform(-2, 2, 3), c]) for _ in range(args.samples)]
        worst = {k: max(float(hd.potential_check(A, phi, p).defect) for p in pts) for k, phi in candidates.items()}
        print(f"{c:>6.2f}  " + "  ".join(f"{worst[k]:>12.3e}" for k in candidates))


if __name__ == "__main__":
    main()
