"""Crossing point of |B/A| = 1/2 for increasingly long-ranged couplings.

    python3 scripts/ranges.py --L 20 --sets 1 "1,0.2" "1,1"
"""

import argparse

from surfmc import CouplingSet
from surfmc.experiments import beta_grid, crossing, ratio_curve, scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=int, default=20)
    ap.add_argument("--sets", nargs="+", default=["1", "1,0.2", "1,1"],
                    help="comma-separated J1..J4 per coupling set")
    ap.add_argument("--beta", type=float, nargs=3, default=[0.05, 0.30, 0.025],
                    metavar=("MIN", "MAX", "STEP"))
    ap.add_argument("--sweeps", type=int, default=80_000)
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    betas = beta_grid(*args.beta)
    for s in args.sets:
        J = CouplingSet(tuple(float(v) for v in s.split(",")))
        res = scan(args.L, J, betas, dict(sweeps=args.sweeps), args.seed,
                   threads=args.threads)
        for p in ratio_curve(res):
            print(f"{s!r},{p.beta},{p.mean:.6f},{p.stderr:.6f}")
        x, err, _ = crossing(res)
        print(f"# J={J.J}: crossing {x:.4f} +- {err:.4f}")


if __name__ == "__main__":
    main()
