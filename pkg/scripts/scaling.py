"""Heat-capacity peaks per lattice size and the beta_c(inf) extrapolation.

    python3 scripts/scaling.py --L 8 12 16 20
"""

import argparse
import json

from surfmc import CouplingSet, fit_beta_c
from surfmc.experiments import beta_grid, finite_size_scaling


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=int, nargs="+", default=[8, 12, 16, 20])
    ap.add_argument("--coarse", type=float, nargs=3, default=[0.18, 0.32, 0.01],
                    metavar=("MIN", "MAX", "STEP"))
    ap.add_argument("--sweeps", type=int, default=80_000)
    ap.add_argument("--coarse-sweeps", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=4)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    refine = dict(half_width=0.02, step=0.004, sweeps=args.sweeps,
                  coarse_sweeps=args.coarse_sweeps)
    peaks, curves, failed = finite_size_scaling(
        args.L, CouplingSet((1.0,)), beta_grid(*args.coarse), dict(sweeps=args.sweeps),
        args.seed, refine, window=5, threads=args.threads)
    for L, pts in curves.items():
        for p in pts:
            print(f"{L},{p.beta},{p.mean:.6f},{p.stderr:.6f}")
    for L, msg in failed.items():
        print(f"# L={L}: {msg}")
    if len(peaks) < 3:
        raise SystemExit("fewer than 3 usable peaks")
    fits = {m: fit_beta_c(peaks, m).to_dict() for m in ("fixed", "free")}
    print(json.dumps(fits, indent=2))


if __name__ == "__main__":
    main()
