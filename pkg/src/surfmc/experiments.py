"""Grid drivers: beta scans, heat-capacity peak search, error-sector convergence.

Every point gets its own seed derived from (base seed, L, beta, tag) so a
point's result does not depend on which other points are run or in what
order.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analysis import ObservablePoint, crossing_beta, heat_capacity, peak_beta, ratio_BA
from .hamiltonian import CouplingSet
from .lattice import SyndromeSpec, build_lattice, neighbor_table, syndrome_string
from .sampler import SamplerConfig, estimate, run_chain


def point_seed(seed, L, beta, tag=0):
    ss = np.random.SeedSequence([int(seed), int(L), int(round(beta * 1e9)), int(tag)])
    return int(ss.generate_state(1, np.uint64)[0])


def beta_grid(lo, hi, step):
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 10) for k in range(n)]


@dataclass
class PointResult:
    L: int
    beta: float
    seed: int
    acc: object
    elapsed: float
    labels: tuple = ()

    @property
    def n_qubits(self):
        return self.acc.meta["n_qubits"]


@dataclass
class Model:
    """Geometry, couplings and neighbour table for one lattice size."""
    L: int
    couplings: CouplingSet
    geom: object = field(init=False)
    table: object = field(init=False)

    def __post_init__(self):
        self.geom = build_lattice(self.L)
        self.table = neighbor_table(self.geom, self.couplings)

    def strings(self, syndromes):
        out = []
        for spec in syndromes:
            if not isinstance(spec, SyndromeSpec):
                spec = SyndromeSpec(tuple(spec or ()))
            out.append(syndrome_string(self.geom, spec))
        return out or None


def scan(L, couplings, betas, sampler, seed=0, syndromes=(), tag=0, threads=1):
    """Run one chain set per beta; returns PointResults in beta order.

    ``sampler`` holds SamplerConfig fields other than beta and seed.
    """
    model = Model(L, couplings)
    strings = model.strings(syndromes)

    def one(beta):
        s = point_seed(seed, L, beta, tag)
        cfg = SamplerConfig(beta=float(beta), seed=s, **sampler)
        t0 = time.perf_counter()
        acc = run_chain(model.geom, model.table, strings, cfg)
        return PointResult(L, float(beta), s, acc, time.perf_counter() - t0,
                           acc.strings)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, betas))
    return [one(b) for b in betas]


def heat_capacity_curve(results):
    return [heat_capacity(r.acc, r.beta, r.n_qubits) for r in results]


def ratio_curve(results, label=None):
    return [ratio_BA(r.acc, label) for r in results]


def find_heat_capacity_peak(L, couplings, coarse, sampler, seed=0, refine=None,
                            window=5, threads=1):
    """Locate the heat-capacity maximum, optionally on a refined grid.

    ``refine`` = dict(half_width, step, sweeps[, coarse_sweeps]); the
    coarse scan brackets the peak and the fine scan around it is used
    for the parabola fit.  Returns (beta_peak, err, points).
    """
    coarse_sampler = dict(sampler)
    if refine and "coarse_sweeps" in refine:
        coarse_sampler["sweeps"] = refine["coarse_sweeps"]
    pts = heat_capacity_curve(scan(L, couplings, coarse, coarse_sampler, seed,
                                   tag=1, threads=threads))
    if not refine:
        b, e = peak_beta(pts, window=window)
        return b, e, pts
    b0, _ = peak_beta(pts, window=3)
    hw, step = refine["half_width"], refine["step"]
    n = int(round(hw / step))
    fine = [round(b0 + k * step, 6) for k in range(-n, n + 1)]
    fine_sampler = dict(sampler, sweeps=refine.get("sweeps", sampler["sweeps"]))
    fpts = heat_capacity_curve(scan(L, couplings, fine, fine_sampler, seed, tag=2,
                                    threads=threads))
    b, e = peak_beta(fpts, window=window)
    return b, e, fpts


def finite_size_scaling(Ls, couplings, coarse, sampler, seed=0, refine=None,
                        window=5, threads=1):
    peaks, curves, failed = {}, {}, {}
    for L in Ls:
        try:
            b, e, pts = find_heat_capacity_peak(L, couplings, coarse, sampler, seed,
                                                refine, window, threads)
        except ValueError as exc:
            failed[L] = str(exc)
            continue
        peaks[L] = (b, e)
        curves[L] = pts
    return peaks, curves, failed


def crossing(results, level=0.5, label=None):
    return crossing_beta(ratio_curve(results, label), level)


def convergence(L, couplings, betas, syndromes, checkpoints, sampler, seed=0,
                threads=1):
    """Error-sector |B/A| at nested sweep budgets against a no-error reference.

    All error strings are measured on one chain per beta; the reference
    no-error curve comes from an independent chain at the largest budget.
    Returns dict with per-checkpoint curves and max deviations.
    """
    top = max(checkpoints)
    samp = dict(sampler, sweeps=top)
    ref = scan(L, couplings, betas, samp, seed, tag=10, threads=threads)
    err = scan(L, couplings, betas, samp, seed, syndromes=syndromes, tag=11,
               threads=threads)
    ref_pts = ratio_curve(ref)
    labels = err[0].labels
    every = samp.get("measure_every", 1)
    out = {"reference": ref_pts, "sectors": {}, "ref_results": ref, "err_results": err}
    for lab in labels:
        per = {}
        for n in sorted(checkpoints):
            pts = [ratio_BA(r.acc.truncated(n // every), lab) for r in err]
            devs = [abs(p.mean - q.mean) for p, q in zip(pts, ref_pts)]
            sig = [math.hypot(p.stderr, q.stderr) for p, q in zip(pts, ref_pts)]
            k = int(np.argmax(devs))
            per[n] = dict(points=pts, max_dev=float(devs[k]), sigma_at_max=float(sig[k]),
                          beta_at_max=float(betas[k]),
                          within_3sigma=bool(all(d <= 3 * s for d, s in zip(devs, sig))))
        out["sectors"][lab] = per
    return out


def point_rows(res):
    """ObservablePoints for the standard sweep observables at one result."""
    acc = res.acc
    r = ratio_BA(acc)
    pts = [r]
    c = estimate(acc, "c")
    pts.append(ObservablePoint(res.L, res.beta, "class_mean", c.mean, c.stderr,
                               acc.n_samples, c.n_bins, syndrome=r.syndrome))
    e = estimate(acc, "E")
    pts.append(ObservablePoint(res.L, res.beta, "energy", e.mean, e.stderr,
                               acc.n_samples, e.n_bins, syndrome=r.syndrome))
    pts.append(heat_capacity(acc, res.beta, res.n_qubits))
    m = estimate(acc, "m")
    pts.append(ObservablePoint(res.L, res.beta, "magnetization_x", m.mean, m.stderr,
                               acc.n_samples, m.n_bins, syndrome=r.syndrome))
    f = 1.0 / math.sqrt(1.0 + r.mean ** 2)
    fe = r.mean / (1.0 + r.mean ** 2) ** 1.5 * r.stderr
    pts.append(ObservablePoint(res.L, res.beta, "fidelity", f, fe, acc.n_samples,
                               r.n_bins, syndrome=r.syndrome, flags=r.flags))
    ap, al = acc.acceptance()
    pts.append(ObservablePoint(res.L, res.beta, "acceptance_plaquette", ap, 0.0,
                               int(acc.counts[0]), 0, syndrome=r.syndrome))
    pts.append(ObservablePoint(res.L, res.beta, "acceptance_line", al, 0.0,
                               int(acc.counts[2]), 0, syndrome=r.syndrome))
    return pts
