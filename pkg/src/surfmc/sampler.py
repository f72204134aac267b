"""Metropolis sampling of restricted configurations with weight exp(-beta E).

One sweep is a Metropolis attempt on every plaquette (fixed index order
unless ``random_order``) followed by ``line_attempts`` attempts to flip a
uniformly chosen logical-Z row, which is the only class-changing move.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .lattice import SyndromeString
from .state import validate_stars, vacuum
from .hamiltonian import move_boundary_pairs, total_energy

RNG_ALGORITHM = "numpy.random.PCG64(seed ^ chain)"
MIN_SAMPLES = 64
MIN_BINS = 32


@dataclass(frozen=True)
class SamplerConfig:
    beta: float
    sweeps: int
    burn_in: int = None          # None -> max(sweeps // 10, 1000)
    seed: int = 0
    n_chains: int = 1
    measure_every: int = 1
    line_attempts: int = 1
    random_order: bool = False
    debug: bool = False

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.sweeps <= 0:
            raise ValueError("sweeps must be positive")
        if self.burn_in is not None and self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if self.n_chains < 1 or self.measure_every < 1 or self.line_attempts < 0:
            raise ValueError("n_chains, measure_every must be >= 1, line_attempts >= 0")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def effective_burn_in(self):
        if self.burn_in is None:
            return max(self.sweeps // 10, 1000)
        return self.burn_in


def make_rng(seed, chain=0):
    return np.random.Generator(np.random.PCG64(int(seed) ^ int(chain)))


@dataclass(frozen=True)
class SampleStats:
    mean: float
    stderr: float
    n_bins: int
    bin_size: int
    flags: tuple = ()

    @property
    def ill_conditioned(self):
        return "ill-conditioned ratio" in self.flags


@dataclass
class Accumulator:
    """Per-chain measurement series plus move counters.

    ``chunks[name]`` is a list with one array per chain; merging two
    accumulators concatenates the lists.  ``S`` holds one column per
    syndrome string, the first being the primary one.
    """
    strings: tuple
    chunks: dict = field(default_factory=lambda: {"c": [], "E": [], "m": [], "S": []})
    counts: np.ndarray = field(default_factory=lambda: np.zeros(4, dtype=np.int64))
    meta: dict = field(default_factory=dict)

    @property
    def n_samples(self):
        return int(sum(len(a) for a in self.chunks["c"]))

    def merge(self, other):
        if self.strings != other.strings:
            raise ValueError("cannot merge accumulators with different strings")
        out = Accumulator(self.strings, {k: self.chunks[k] + other.chunks[k]
                                         for k in self.chunks},
                          self.counts + other.counts, dict(self.meta))
        return out

    def truncated(self, n):
        """First ``n`` measurements of every chain."""
        return Accumulator(self.strings, {k: [a[:n] for a in v]
                                          for k, v in self.chunks.items()},
                           self.counts.copy(), dict(self.meta))

    def _string_col(self, label):
        if label is None:
            return 0
        return self.strings.index(label)

    def series(self, name, label=None):
        """Concatenated series for c, E, E2, m, S, Sc (S/Sc for string ``label``)."""
        if name in ("c", "E", "m"):
            return np.concatenate(self.chunks[name]).astype(float)
        if name == "E2":
            return self.series("E") ** 2
        if name in ("S", "Sc"):
            col = self._string_col(label)
            S = np.concatenate([a[:, col] for a in self.chunks["S"]]).astype(float)
            return S if name == "S" else S * self.series("c")
        raise KeyError(name)

    def acceptance(self):
        c = self.counts
        return (c[1] / c[0] if c[0] else float("nan"),
                c[3] / c[2] if c[2] else float("nan"))


# ---------------------------------------------------------------------------
# binning


def bin_size_for(n):
    """Largest power of two leaving at least MIN_BINS bins."""
    if n < MIN_SAMPLES:
        raise ValueError(f"need >= {MIN_SAMPLES} samples, got {n}")
    b = 1
    while n // (2 * b) >= MIN_BINS:
        b *= 2
    return b


def bin_means(x, b):
    nb = len(x) // b
    return x[: nb * b].reshape(nb, b).mean(axis=1)


def jackknife(func, series):
    """Jackknife over bins of a function of the series means.

    Returns (estimate from full means, stderr, n_bins, bin_size).
    """
    n = len(series[0])
    b = bin_size_for(n)
    nb = n // b
    full = [np.mean(s) for s in series]
    bsum = [bin_means(s, b) * b for s in series]
    tot = [bs.sum() for bs in bsum]
    m = nb * b
    loo = np.array([func(*[(t - bs[k]) / (m - b) for t, bs in zip(tot, bsum)])
                    for k in range(nb)])
    err = np.sqrt((nb - 1) / nb * np.sum((loo - loo.mean()) ** 2))
    return func(*full), float(err), nb, b


def _plain(x):
    b = bin_size_for(len(x))
    bm = bin_means(x, b)
    nb = len(bm)
    err = bm.std(ddof=1) / np.sqrt(nb)
    return SampleStats(float(np.mean(x)), float(err), nb, b)


def estimate(acc, observable, label=None):
    """Mean and binning error of ``observable``.

    Plain observables: c, E, E2, m, S, Sc.  ``ratio`` gives the signed
    <S c>/<S> with a jackknife error and is flagged ill-conditioned when
    <S> is within three standard errors of zero.
    """
    if observable == "ratio":
        S = acc.series("S", label)
        Sc = acc.series("Sc", label)
        s_stats = _plain(S)
        flags = ()
        if abs(s_stats.mean) < 3 * s_stats.stderr or s_stats.mean == 0:
            flags = ("ill-conditioned ratio",)
        with np.errstate(divide="ignore", invalid="ignore"):
            mean, err, nb, b = jackknife(lambda a, d: a / d, [Sc, S])
        return SampleStats(float(mean), err, nb, b, flags)
    return _plain(acc.series(observable, label))


# ---------------------------------------------------------------------------
# sweeping


def _string_arrays(strings):
    K = len(strings)
    width = max([len(s) for s in strings] + [1])
    arr = np.zeros((K, width), dtype=np.int64)
    n = np.zeros(K, dtype=np.int64)
    for k, s in enumerate(strings):
        arr[k, : len(s)] = s.qubits
        n[k] = len(s)
    return arr, n


def _run(config, table, beta, n_sweeps, rng, cfg, strings=(), record=False,
         moves=None):
    geom = config.geom
    if moves is None:
        moves = move_boundary_pairs(geom, table)
    K = len(strings)
    str_arr, str_n = _string_arrays(strings)
    n_meas = n_sweeps // cfg.measure_every if record else 0
    out_c = np.zeros(n_meas, dtype=np.int8)
    out_E = np.zeros(n_meas)
    out_S = np.zeros((n_meas, K), dtype=np.int8)
    out_m = np.zeros(n_meas, dtype=np.int8)
    counts = np.zeros(4, dtype=np.int64)
    scal = np.array([config.energy, float(config.class_label)])
    _kernels.run_sweeps(config.spins, scal, geom.plaquette_qubits, geom.plaquette_sizes,
                        geom.logical_z_rows, *moves,
                        float(beta), int(n_sweeps), int(cfg.measure_every),
                        int(cfg.line_attempts), bool(cfg.random_order), rng,
                        str_arr, str_n, int(geom.central_qubit()),
                        out_c, out_E, out_S, out_m, counts)
    config.energy = float(scal[0])
    config.class_label = int(scal[1])
    return counts, (out_c, out_E, out_m, out_S)


def sweep(config, table, beta, rng, line_attempts=1, random_order=False):
    """One sweep in place; returns [plaq tried, plaq accepted, line tried, line accepted]."""
    cfg = SamplerConfig(beta=beta, sweeps=1, line_attempts=line_attempts,
                        random_order=random_order)
    counts, _ = _run(config, table, beta, 1, rng, cfg)
    return counts


def _check(config, table):
    assert validate_stars(config), "star constraint violated"
    for col in range(config.geom.L):
        assert config.recomputed_class(col) == config.class_label, "class label drift"
    e = total_energy(config, table)
    assert abs(e - config.energy) <= 1e-9 * max(1.0, abs(e)), "energy drift"


def _as_strings(syndrome):
    if syndrome is None:
        return (SyndromeString(np.zeros(0, dtype=np.int64)),)
    if isinstance(syndrome, SyndromeString):
        return (syndrome,)
    return tuple(syndrome)


def run_chain(geom, table, syndrome, cfg, couplings=None):
    """Sample ``cfg.n_chains`` independent chains from the vacuum and merge them.

    ``syndrome`` is a SyndromeString, a sequence of them (all measured on
    the same chain, the first being primary) or None for the no-error sector.
    """
    strings = _as_strings(syndrome)
    labels = tuple(s.spec.label() for s in strings)
    acc = None
    moves = move_boundary_pairs(geom, table)
    for chain in range(cfg.n_chains):
        rng = make_rng(cfg.seed, chain)
        config = vacuum(geom, table)
        counts = np.zeros(4, dtype=np.int64)
        if cfg.effective_burn_in:
            _run(config, table, cfg.beta, cfg.effective_burn_in, rng, cfg, moves=moves)
        if cfg.debug:
            _check(config, table)
        counts, (c, E, m, S) = _run(config, table, cfg.beta, cfg.sweeps, rng, cfg,
                                    strings, record=True, moves=moves)
        if cfg.debug:
            _check(config, table)
        one = Accumulator(labels, {"c": [c], "E": [E], "m": [m], "S": [S]}, counts)
        acc = one if acc is None else acc.merge(one)
    acc.meta = dict(L=geom.L, beta=cfg.beta, n_qubits=geom.n_qubits,
                    sweeps=cfg.sweeps, burn_in=cfg.effective_burn_in,
                    seed=cfg.seed, n_chains=cfg.n_chains,
                    measure_every=cfg.measure_every,
                    line_attempts=cfg.line_attempts,
                    J=tuple(float(v) for v in table.J),
                    rng=RNG_ALGORITHM)
    return acc
