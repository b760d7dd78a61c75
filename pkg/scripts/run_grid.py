"""Run the full verification suite over the default 13-point grid.

    python3 scripts/run_grid.py --out results/grid.jsonl
    WABID_WORKERS=4 python3 scripts/run_grid.py --radius 7 --margin 2
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from wabid.cli import RunConfig, run


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radius", type=int, default=6)
    ap.add_argument("--margin", type=int, default=2)
    ap.add_argument("--k-min", type=int, default=-4)
    ap.add_argument("--k-max", type=int, default=4)
    ap.add_argument("--out", default="results/grid.jsonl")
    args = ap.parse_args()

    cfg = replace(
        RunConfig(format="machine"),
        radius=args.radius,
        interior_margin=args.margin,
        k_min=args.k_min,
        k_max=args.k_max,
    ).validate()
    report, code = run(cfg)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report.machine(), encoding="utf-8")
    sys.stdout.write(report.text())
    print(f"machine report: {out}")
    return code


if __name__ == "__main__":
    sys.exit(main())
