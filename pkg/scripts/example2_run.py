"""Example 2 at a chosen resolution, writing the standard CSV outputs.

    python scripts/example2_run.py --N 24 --N1 18 --t-end 2 --out runs/ex2
"""

import argparse

from sphere_nse.config import parse_config
from sphere_nse.runner import run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=24)
    ap.add_argument("--N1", type=int, default=None)
    ap.add_argument("--t-end", type=float, default=2.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--rtol", type=float, default=1e-3)
    ap.add_argument("--dump-grid", action="store_true")
    ap.add_argument("--out", default="runs/example2")
    args = ap.parse_args()

    lines = [
        "experiment = example2",
        f"N = {args.N}",
        f"t_end = {args.t_end}",
        f"seed = {args.seed}",
        f"rtol = {args.rtol}",
        f"output_dir = {args.out}",
        f"dump_grid = {str(args.dump_grid).lower()}",
    ]
    if args.N1 is not None:
        lines.append(f"N1 = {args.N1}")
    result = run(parse_config("\n".join(lines)))
    print(f"t = {result.t}: {result.stats}")
    print(f"outputs in {args.out}")


if __name__ == "__main__":
    main()
