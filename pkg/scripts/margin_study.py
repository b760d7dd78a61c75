"""How the certified dimension settles as the interior margin grows.

Boundary-supported solutions inflate the raw dimension of a windowed
system; this prints raw and certified dimensions for a range of margins.

    python3 scripts/margin_study.py --radius 7
"""

import argparse

from wabid.bider import delta_system_solve, solve_biderivations
from wabid.linmap import solve_derivations
from wabid.wab import Params


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radius", type=int, default=7)
    args = ap.parse_args()
    R = args.radius

    print("derivations, W(0,0) k=0")
    for m in range(0, R - 1):
        rep = solve_derivations(Params(0, 0), 0, R, m)
        print(f"  margin {m}: raw {rep.raw_dimension} certified {rep.certified_dimension}")
    print("biderivations, W(0,-1) k=0")
    for m in range(0, min(R - 1, 4)):
        rep = solve_biderivations(Params(0, -1), 0, R, m)
        print(f"  margin {m}: raw {rep.raw_dimension} certified {rep.certified_dimension}")
    print("delta system")
    for m in range(0, R - 1):
        ns = delta_system_solve(R, m)
        print(f"  margin {m}: raw {ns.raw_dimension} certified {ns.certified_dimension}")


if __name__ == "__main__":
    main()
