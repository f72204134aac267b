"""Command-line driver.

    surfmc sweep    --config run.json   # |B/A|, energy, C, ... over a beta grid
    surfmc scaling  --config run.json   # heat-capacity peaks and beta_c(inf) fit
    surfmc syndrome --config run.json   # error-sector convergence vs no-error curve
    surfmc oracle   --config run.json   # exact enumeration for small L

Exit codes: 0 success, 2 configuration error, 3 capability error.
"""

import argparse
import csv
import hashlib
import io
import json
import math
import os
import platform
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__, oracle
from .analysis import fit_beta_c
from .experiments import beta_grid, convergence, finite_size_scaling, point_rows, scan
from .hamiltonian import CouplingSet, OhmicParameters, couplings_from_ohmic
from .lattice import SyndromeSpec, build_lattice, neighbor_table, syndrome_string
from .sampler import RNG_ALGORITHM

CSV_SCHEMA_VERSION = 1
CSV_COLUMNS = ["run_id", "L", "beta", "J1", "J2", "J3", "J4", "syndrome", "sweeps",
               "burn_in", "seed", "n_chains", "observable", "mean", "stderr",
               "n_bins", "flags"]
SAMPLER_KEYS = ("sweeps", "burn_in", "seed", "n_chains", "measure_every",
                "line_attempts", "random_order")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    lattice_sizes: list
    betas: list
    couplings: CouplingSet
    syndromes: list = field(default_factory=lambda: [()])
    sweeps: int = 80000
    burn_in: int = None
    seed: int = 0
    n_chains: int = 1
    measure_every: int = 1
    line_attempts: int = 1
    random_order: bool = False
    out_dir: str = "results"
    checkpoints: list = field(default_factory=list)
    x_mode: str = "fixed"
    peak_window: int = 5
    refine: dict = None
    raw: dict = field(default_factory=dict)

    def sampler(self):
        return dict(sweeps=self.sweeps, burn_in=self.burn_in, n_chains=self.n_chains,
                    measure_every=self.measure_every, line_attempts=self.line_attempts,
                    random_order=self.random_order)

    def run_id(self):
        # the output location does not change any result
        blob = json.dumps({k: v for k, v in self.raw.items() if k != "out_dir"},
                          sort_keys=True).encode()
        return hashlib.sha1(blob).hexdigest()[:12]


def _parse_betas(spec):
    if isinstance(spec, dict):
        try:
            lo, hi, step = float(spec["min"]), float(spec["max"]), float(spec["step"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"beta grid needs min/max/step: {exc}") from None
        if step <= 0 or hi < lo:
            raise ConfigError("beta grid needs step > 0 and max >= min")
        betas = beta_grid(lo, hi, step)
    elif isinstance(spec, (list, tuple)):
        betas = [float(b) for b in spec]
    elif isinstance(spec, (int, float)):
        betas = [float(spec)]
    else:
        raise ConfigError("beta must be a list, a number or {min, max, step}")
    if not betas:
        raise ConfigError("beta grid is empty")
    if any(b < 0 for b in betas):
        raise ConfigError("beta values must be >= 0")
    return betas


def _parse_couplings(spec):
    if isinstance(spec, dict) and "ohmic" in spec:
        o = dict(spec["ohmic"])
        M = int(o.pop("M", 2))
        try:
            return couplings_from_ohmic(OhmicParameters(**o), M=M)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad ohmic parameters: {exc}") from None
    if isinstance(spec, dict):
        spec = [spec.get(f"J{m}", 0.0) for m in range(1, 5)]
        while len(spec) > 1 and spec[-1] == 0.0:
            spec.pop()
    try:
        return CouplingSet(tuple(spec))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad couplings: {exc}") from None


def _parse_syndrome(spec):
    if spec in (None, "none", [], ()):
        return ()
    try:
        return SyndromeSpec(tuple(tuple(p) for p in spec)).flipped_plaquettes
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad syndrome {spec!r}: {exc}") from None


def load_config(raw):
    """Validate a config mapping (see configs/*.json for examples)."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    try:
        return _load(dict(raw))
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid config: {exc}") from None


def _load(raw):
    try:
        Ls = raw.get("lattice_sizes", raw.get("L"))
        Ls = [int(Ls)] if isinstance(Ls, (int, float)) else [int(v) for v in Ls]
    except TypeError:
        raise ConfigError("lattice_sizes must be an integer or a list") from None
    if not Ls or any(L < 2 for L in Ls):
        raise ConfigError("lattice sizes must be integers >= 2")
    betas = _parse_betas(raw.get("beta"))
    couplings = _parse_couplings(raw.get("couplings", [1.0]))
    if "syndromes" in raw:
        syndromes = [_parse_syndrome(s) for s in raw["syndromes"]]
    else:
        syndromes = [_parse_syndrome(raw.get("syndrome"))]
    samp = dict(raw.get("sampler", {}))
    unknown = set(samp) - set(SAMPLER_KEYS)
    if unknown:
        raise ConfigError(f"unknown sampler keys: {sorted(unknown)}")
    cfg = RunConfig(lattice_sizes=Ls, betas=betas, couplings=couplings,
                    syndromes=syndromes, out_dir=raw.get("out_dir", "results"),
                    checkpoints=[int(c) for c in raw.get("checkpoints", [])],
                    x_mode=raw.get("x_mode", "fixed"),
                    peak_window=int(raw.get("peak_window", 5)),
                    refine=raw.get("refine"), raw=raw, **samp)
    if cfg.sweeps <= 0 or (cfg.burn_in is not None and cfg.burn_in < 0):
        raise ConfigError("sweeps must be > 0 and burn_in >= 0")
    if cfg.n_chains < 1 or cfg.measure_every < 1:
        raise ConfigError("n_chains and measure_every must be >= 1")
    if not 0 <= int(cfg.seed) < 2 ** 64:
        raise ConfigError("seed must fit in 64 unsigned bits")
    if cfg.x_mode not in ("fixed", "free", "both"):
        raise ConfigError("x_mode must be fixed, free or both")
    for L in Ls:
        geom = build_lattice(L)
        for s in syndromes:
            try:
                SyndromeSpec(s).validate(geom)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
    return cfg


# ---------------------------------------------------------------------------
# output


def _fmt(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def _row(cfg, run_id, L, beta, syndrome, sweeps, burn_in, seed, obs, mean, stderr,
         n_bins, flags=()):
    J = cfg.couplings.padded()
    return [run_id, L, _fmt(float(beta)), *(_fmt(j) for j in J), syndrome, sweeps,
            burn_in, seed, cfg.n_chains, obs, _fmt(float(mean)), _fmt(float(stderr)),
            n_bins, ";".join(flags)]


def write_csv(path, rows):
    rows = sorted(rows, key=lambda r: (int(r[1]), float(r[2]), str(r[7]), int(r[8]),
                                       str(r[12])))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def write_manifest(path, cfg, command, points, elapsed, extra=None):
    man = dict(
        command=command, run_id=cfg.run_id(), csv_schema_version=CSV_SCHEMA_VERSION,
        code_version=__version__, python=platform.python_version(),
        numpy=np.__version__, rng=RNG_ALGORITHM, config=cfg.raw,
        couplings=list(cfg.couplings.J), wall_clock_seconds=elapsed,
        started=time.strftime("%Y-%m-%dT%H:%M:%S"),
        points=points)
    if extra:
        man.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(man, fh, indent=2, sort_keys=True, default=_json_default)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(type(o))


def _point_info(res, label="none"):
    ap, al = res.acc.acceptance()
    return dict(L=res.L, beta=res.beta, seed=res.seed, syndrome=label,
                sweeps=res.acc.meta["sweeps"], burn_in=res.acc.meta["burn_in"],
                plaquette_attempts=int(res.acc.counts[0]),
                line_attempts=int(res.acc.counts[2]),
                acceptance_plaquette=float(ap), acceptance_line=float(al),
                seconds=round(res.elapsed, 3))


def _syndrome_label(s):
    return SyndromeSpec(s).label()


# ---------------------------------------------------------------------------
# subcommands


def cmd_sweep(cfg, out_dir, threads=1):
    t0 = time.perf_counter()
    run_id = cfg.run_id()
    rows, info = [], []
    syn = cfg.syndromes[0]
    for L in cfg.lattice_sizes:
        results = scan(L, cfg.couplings, cfg.betas, cfg.sampler(), cfg.seed,
                       syndromes=[syn], threads=threads)
        for res in results:
            meta = res.acc.meta
            for p in point_rows(res):
                rows.append(_row(cfg, run_id, L, res.beta, _syndrome_label(syn),
                                 meta["sweeps"], meta["burn_in"], res.seed, p.name,
                                 p.mean, p.stderr, p.n_bins, p.flags))
            info.append(_point_info(res, _syndrome_label(syn)))
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "sweep.csv"), rows)
    write_manifest(os.path.join(out_dir, "manifest.json"), cfg, "sweep", info,
                   time.perf_counter() - t0)
    return rows


def cmd_scaling(cfg, out_dir, threads=1):
    t0 = time.perf_counter()
    if len(cfg.lattice_sizes) < 3:
        raise ConfigError("scaling needs at least 3 lattice sizes")
    run_id = cfg.run_id()
    peaks, curves, failed = finite_size_scaling(
        cfg.lattice_sizes, cfg.couplings, cfg.betas, cfg.sampler(), cfg.seed,
        cfg.refine, cfg.peak_window, threads)
    for L, msg in failed.items():
        print(f"L={L}: {msg}", file=sys.stderr)
    rows = []
    for L, pts in curves.items():
        for p in pts:
            rows.append(_row(cfg, run_id, L, p.beta, "none", cfg.sweeps, "", "",
                             "heat_capacity", p.mean, p.stderr, p.n_bins))
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "heat_capacity.csv"), rows)
    with open(os.path.join(out_dir, "peaks.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["L", "beta_peak", "stderr", "status"])
        for L in cfg.lattice_sizes:
            if L in peaks:
                w.writerow([L, _fmt(peaks[L][0]), _fmt(peaks[L][1]), "ok"])
            else:
                w.writerow([L, "", "", failed[L]])
    if len(peaks) < 3:
        raise ConfigError(f"only {len(peaks)} usable peaks; fit needs 3")
    fits = {}
    modes = ("fixed", "free") if cfg.x_mode == "both" else (cfg.x_mode,)
    for mode in modes:
        fits[mode] = fit_beta_c(peaks, x_mode=mode).to_dict()
    with open(os.path.join(out_dir, "scaling_fit.json"), "w") as fh:
        json.dump(fits, fh, indent=2, sort_keys=True)
    write_manifest(os.path.join(out_dir, "manifest.json"), cfg, "scaling", [],
                   time.perf_counter() - t0, dict(fits=fits))
    return fits


def cmd_syndrome(cfg, out_dir, threads=1):
    t0 = time.perf_counter()
    syns = [s for s in cfg.syndromes if s]
    if not syns:
        raise ConfigError("syndrome command needs at least one 1- or 2-error syndrome")
    checkpoints = cfg.checkpoints or [cfg.sweeps]
    run_id = cfg.run_id()
    rows, info, summary = [], [], {}
    for L in cfg.lattice_sizes:
        conv = convergence(L, cfg.couplings, cfg.betas, syns, checkpoints,
                           cfg.sampler(), cfg.seed, threads)
        top = max(checkpoints)
        for res, p in zip(conv["ref_results"], conv["reference"]):
            rows.append(_row(cfg, run_id, L, p.beta, "none", top,
                             res.acc.meta["burn_in"], res.seed, "abs_BA_ratio",
                             p.mean, p.stderr, p.n_bins, p.flags))
            info.append(_point_info(res))
        for lab, per in conv["sectors"].items():
            for n, d in per.items():
                for res, p in zip(conv["err_results"], d["points"]):
                    rows.append(_row(cfg, run_id, L, p.beta, lab, n,
                                     res.acc.meta["burn_in"], res.seed,
                                     "abs_BA_ratio", p.mean, p.stderr, p.n_bins,
                                     p.flags))
            summary[f"L{L}:{lab}"] = {str(n): {k: v for k, v in d.items() if k != "points"}
                                      for n, d in per.items()}
        info.extend(_point_info(r, "errors") for r in conv["err_results"])
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "syndrome.csv"), rows)
    with open(os.path.join(out_dir, "convergence.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    write_manifest(os.path.join(out_dir, "manifest.json"), cfg, "syndrome", info,
                   time.perf_counter() - t0)
    return summary


def cmd_oracle(cfg, out_dir=None, threads=1):
    out = []
    for L in cfg.lattice_sizes:
        geom = build_lattice(L)
        table = neighbor_table(geom, cfg.couplings)
        strings = [syndrome_string(geom, SyndromeSpec(s)) for s in cfg.syndromes]
        spec = oracle.enumerate_spectrum(geom, table, strings)
        for k, s in enumerate(cfg.syndromes):
            for b in cfg.betas:
                r = oracle.observables(spec, b, L=L, column=k).to_dict()
                r["syndrome"] = _syndrome_label(s)
                r["couplings"] = list(cfg.couplings.J)
                out.append(r)
    text = json.dumps(out, indent=2, sort_keys=True, default=_json_default)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "oracle.json"), "w") as fh:
            fh.write(text + "\n")
    return out, text


COMMANDS = {"sweep": cmd_sweep, "scaling": cmd_scaling, "syndrome": cmd_syndrome,
            "oracle": cmd_oracle}


def build_parser():
    ap = argparse.ArgumentParser(prog="surfmc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--seed", type=int, help="override sampler seed")
        p.add_argument("--out-dir", help="output directory (default from config)")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--L", type=int, nargs="+", help="override lattice sizes")
        p.add_argument("--beta", type=float, nargs="*", help="override beta list")
        p.add_argument("--sweeps", type=int, help="override measurement sweeps")
        p.add_argument("--couplings", type=float, nargs="+", help="override J1..J4")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        raw = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        if args.L:
            raw["lattice_sizes"] = args.L
        if args.beta is not None:
            raw["beta"] = args.beta
        if args.couplings:
            raw["couplings"] = args.couplings
        samp = dict(raw.get("sampler", {}))
        if args.seed is not None:
            samp["seed"] = args.seed
        if args.sweeps is not None:
            samp["sweeps"] = args.sweeps
        raw["sampler"] = samp
        if args.out_dir:
            raw["out_dir"] = args.out_dir
        cfg = load_config(raw)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        result = COMMANDS[args.command](cfg, cfg.out_dir, args.threads)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except oracle.EnumerationTooLarge as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return 3
    if args.command == "oracle":
        print(result[1])
    elif args.command == "scaling":
        print(json.dumps(result, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
