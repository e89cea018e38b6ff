"""Example 1 error against truncation: terminal error and the projection floor.

    python scripts/example1_convergence.py --truncations 8 10 12 14 16 --out conv.csv
"""

import argparse
import csv
import time

from sphere_nse.diagnostics import l2_norm
from sphere_nse.experiments import Example1Spec, example1_exact
from sphere_nse.harmonic_basis import ModeIndex
from sphere_nse.validation import example1_run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--truncations", type=int, nargs="+", default=[8, 10, 12, 14, 16])
    ap.add_argument("--N0", type=int, default=16)
    ap.add_argument("--nu", type=float, default=0.1)
    ap.add_argument("--omega", type=float, default=1.0)
    ap.add_argument("--t-end", type=float, default=2.0)
    ap.add_argument("--rtol", type=float, default=1e-6)
    ap.add_argument("--atol", type=float, default=1e-10)
    ap.add_argument("--out", default=None, help="optional CSV path")
    args = ap.parse_args()

    spec = Example1Spec(args.N0, args.nu, args.omega)
    exact = example1_exact(args.t_end, spec)
    rows = []
    print(f"{'N':>4} {'error':>12} {'floor':>12} {'steps':>6} {'sec':>7}")
    for N in args.truncations:
        start = time.perf_counter()
        _, errors, _, res = example1_run(N, spec, args.t_end, args.rtol, args.atol, checkpoints=1)
        floor = l2_norm(exact[ModeIndex(N).size:]) if N < args.N0 else 0.0
        rows.append((N, errors[-1], floor, res.stats["accepted"]))
        print(f"{N:4d} {errors[-1]:12.4e} {floor:12.4e} {res.stats['accepted']:6d} "
              f"{time.perf_counter() - start:7.2f}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["N", "error", "projection_floor", "steps"])
            for N, err, floor, steps in rows:
                w.writerow([N, "%.16e" % err, "%.16e" % floor, steps])


if __name__ == "__main__":
    main()
