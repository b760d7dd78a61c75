"""Wall-clock cost of the exact solvers as the window grows.

    python3 scripts/bench_solvers.py --radii 4 5 6 7 8
"""

import argparse
import time
from fractions import Fraction

from wabid.bider import solve_biderivations
from wabid.linmap import solve_derivations
from wabid.wab import Params

POINTS = [Params(0, 0), Params(Fraction(1, 3), Fraction(5, 2)), Params(2, -1)]


def timed(fn, *args):
    t0 = time.perf_counter()
    rep = fn(*args)
    return rep, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radii", type=int, nargs="+", default=[4, 5, 6, 7])
    ap.add_argument("--margin", type=int, default=2)
    args = ap.parse_args()

    print(f"{'params':<12} {'R':>3} {'der s':>8} {'bider s':>8} {'unknowns':>9} {'raw':>4} {'cert':>5}")
    for p in POINTS:
        for R in args.radii:
            _, td = timed(solve_derivations, p, 0, R, args.margin)
            rep, tb = timed(solve_biderivations, p, 0, R, args.margin)
            n = 8 * (2 * R + 1) ** 2
            print(f"{str(p):<12} {R:>3} {td:>8.3f} {tb:>8.3f} {n:>9} {rep.raw_dimension:>4} {rep.certified_dimension:>5}")


if __name__ == "__main__":
    main()
