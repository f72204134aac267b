"""Exact enumeration of all restricted states for small lattices."""

import math
from dataclasses import dataclass, asdict

import numpy as np

from . import _kernels
from .analysis import fidelity_from_ratio
from .sampler import _as_strings, _string_arrays
from .state import vacuum

MAX_BITS = 24


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Spectrum:
    """Every restricted state's energy, class, string values and centre spin."""
    E: np.ndarray
    c: np.ndarray
    S: np.ndarray       # (n_states, n_strings)
    m: np.ndarray
    n_qubits: int
    labels: tuple

    @property
    def n_states(self):
        return len(self.E)


@dataclass(frozen=True)
class ExactResult:
    L: int
    beta: float
    n_states: int
    Z_I: float          # relative to the weight of the lowest-energy state
    Z_II: float
    c: float
    S: float
    Sc: float
    E: float
    E2: float
    heat_capacity: float
    m: float
    ratio: float        # signed <S c>/<S>, nan if <S> == 0
    abs_ratio: float
    fidelity: float

    def to_dict(self):
        return asdict(self)


def enumerate_spectrum(geom, table, syndrome=None):
    n_bits = geom.n_plaquettes + 1
    if n_bits > MAX_BITS:
        raise EnumerationTooLarge(
            f"L={geom.L} needs 2^{n_bits} states, bound is 2^{MAX_BITS}")
    strings = _as_strings(syndrome)
    str_arr, str_n = _string_arrays(strings)
    n = 1 << n_bits
    out_E = np.zeros(n)
    out_c = np.zeros(n, dtype=np.int8)
    out_S = np.zeros((n, len(strings)), dtype=np.int8)
    out_m = np.zeros(n, dtype=np.int8)
    config = vacuum(geom, table)
    mark = np.zeros(geom.n_qubits, dtype=np.int8)
    _kernels.gray_enumerate(config.spins, geom.plaquette_qubits, geom.plaquette_sizes,
                            geom.logical_z_rows, table.indptr, table.indices,
                            table.weights, config.energy, str_arr, str_n,
                            geom.central_qubit(), out_E, out_c, out_S, out_m, mark)
    return Spectrum(out_E, out_c, out_S, out_m, geom.n_qubits,
                    tuple(s.spec.label() for s in strings))


def observables(spec, beta, L=None, column=0):
    """Boltzmann averages over a precomputed spectrum."""
    E = spec.E
    x = -beta * E
    w = np.exp(x - x.max())
    Z = w.sum()

    def avg(v):
        return float(np.dot(w, v) / Z)

    c = spec.c.astype(float)
    S = spec.S[:, column].astype(float)
    e_mean = avg(E)
    e2 = avg(E * E)
    var = avg((E - e_mean) ** 2)
    s_mean, sc_mean = avg(S), avg(S * c)
    ratio = sc_mean / s_mean if s_mean != 0 else math.nan
    abs_ratio = abs(ratio)
    return ExactResult(
        L=L, beta=beta, n_states=spec.n_states,
        Z_I=float(w[c > 0].sum()), Z_II=float(w[c < 0].sum()),
        c=avg(c), S=s_mean, Sc=sc_mean, E=e_mean, E2=e2,
        heat_capacity=beta ** 2 * var / spec.n_qubits, m=avg(spec.m.astype(float)),
        ratio=ratio, abs_ratio=abs_ratio,
        fidelity=fidelity_from_ratio(abs_ratio) if not math.isnan(abs_ratio) else math.nan)


def enumerate(geom, table, beta, syndrome=None):
    """Exact observables at ``beta`` (the first string is used for S)."""
    return observables(enumerate_spectrum(geom, table, syndrome), beta, L=geom.L)
