"""Sweep the curvature identities of the r-twisted dual connection over random (S, r).

S ranges over small left-symmetric algebras (commutative and not); r is a
random rational matrix, so the quasi-S conditions generally fail. Both
identities are checked exactly unless --float is given.
"""
import argparse
from fractions import Fraction

import numpy as np

from hessalg import algcore as ac
from hessalg import catalog as cat
from hessalg import phasespace as ps
from hessalg.numeric import exact_array

NONCOMMUTATIVE = {
    "affine_line": [(2, 1, 1, 1), (2, 2, 2, 1)],
    "graded_square": [(2, 1, 1, 1), (2, 2, 2, 2), (1, 1, 2, 1)],
    "graded3": [(2, 1, 1, 1), (2, 2, 2, 2), (1, 1, 2, 1), (2, 3, 3, 1)],
}


def pool():
    out = [(name, ac.from_products(max(max(p[:3]) for p in prods), prods)) for name, prods in NONCOMMUTATIVE.items()]
    out += [(f"ex.{e.index}", e.algebra) for e in cat.catalog()]
    out += [(f"tp({k})", ac.truncated_polynomial(k)) for k in range(2, 6)]
    return out


def random_r(rng, n, exact):
    num, den = rng.integers(-5, 6, size=(n, n)), rng.integers(1, 4, size=(n, n))
    if exact:
        return exact_array(np.array([[Fraction(int(a), int(b)) for a, b in zip(ra, rb)]
                                     for ra, rb in zip(num, den)], dtype=object))
    return num / den


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=0)
    ap.add_argument("--float", action="store_true", help="float64 instead of exact rationals")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    algebras = pool()
    worst = {}
    bad = 0
    for i in range(args.count):
        name, A = algebras[int(rng.integers(len(algebras)))]
        S = A.st if not args.float else A.as_float().st
        for rep in ps.lemma_check(S, random_r(rng, A.dim, not args.float)):
            worst[rep.name] = max(worst.get(rep.name, 0.0), float(rep.defect))
            if not rep.passed:
                bad += 1
                print(f"case {i} ({name}): {rep.name} {rep.status} defect {float(rep.defect):.3e} at {rep.witness}")
    for k, v in sorted(worst.items()):
        print(f"{k}: max defect {v:.3e} over {args.count} cases")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
