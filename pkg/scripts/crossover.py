"""|B/A| against beta for several lattice sizes (no-error sector, J1 = 1).

    python3 scripts/crossover.py --L 20 30 --sweeps 80000
"""

import argparse

from surfmc import CouplingSet, fidelity_from_ratio
from surfmc.experiments import beta_grid, crossing, ratio_curve, scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=int, nargs="+", default=[20])
    ap.add_argument("--beta", type=float, nargs=3, default=[0.05, 0.40, 0.025],
                    metavar=("MIN", "MAX", "STEP"))
    ap.add_argument("--sweeps", type=int, default=80_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    betas = beta_grid(*args.beta)
    print("L,beta,abs_BA_ratio,stderr,fidelity,flags")
    for L in args.L:
        res = scan(L, CouplingSet((1.0,)), betas, dict(sweeps=args.sweeps), args.seed,
                   threads=args.threads)
        for p in ratio_curve(res):
            print(f"{L},{p.beta},{p.mean:.6f},{p.stderr:.6f},"
                  f"{fidelity_from_ratio(p.mean):.6f},{';'.join(p.flags)}")
        x, err, slope = crossing(res)
        print(f"# L={L} crosses 0.5 at beta={x:.4f} +- {err:.4f}, slope {slope:.1f}")


if __name__ == "__main__":
    main()
