"""Effective action H = -sum J_ij s_i s_j and the Ohmic-bath coupling formulas."""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .lattice import MAX_NEIGHBOR_ORDER, neighbor_shells


@dataclass(frozen=True)
class CouplingSet:
    """Exchange couplings J_1..J_M by neighbour order (dimensionless)."""
    J: tuple = (1.0,)

    def __post_init__(self):
        J = tuple(float(v) for v in self.J)
        if not 1 <= len(J) <= MAX_NEIGHBOR_ORDER:
            raise ValueError(f"need 1..{MAX_NEIGHBOR_ORDER} couplings, got {len(J)}")
        if not all(math.isfinite(v) for v in J):
            raise ValueError("couplings must be finite")
        object.__setattr__(self, "J", J)

    def padded(self, n=MAX_NEIGHBOR_ORDER):
        return self.J + (0.0,) * (n - len(self.J))


@dataclass(frozen=True)
class OhmicParameters:
    lam: float      # coupling to the bosonic field
    omega0: float   # characteristic boson frequency
    v: float        # bosonic mode velocity
    delta: float    # QEC cycle duration

    def __post_init__(self):
        if self.omega0 <= 0 or self.v <= 0 or self.delta <= 0:
            raise ValueError("omega0, v and delta must be positive")
        if self.lam < 0:
            raise ValueError("lam must be non-negative")

    @property
    def light_cone(self):
        return self.v * self.delta


def total_energy(config, table):
    spins = getattr(config, "spins", config)
    return float(_kernels.total_energy(np.asarray(spins, dtype=np.int8),
                                       table.pair_i, table.pair_j, table.pair_J))


def delta_energy(config, flip_set, table):
    """Energy change of negating ``flip_set``; the configuration is not touched."""
    spins = getattr(config, "spins", config)
    qs = np.unique(np.asarray(flip_set, dtype=np.int64))
    mark = np.zeros(len(spins), dtype=np.int8)
    return float(_kernels.delta_flip(spins, qs, len(qs), table.indptr,
                                     table.indices, table.weights, mark))


def move_boundary_pairs(geom, table):
    """Boundary pairs of every elementary move (plaquettes, then logical-Z rows).

    Returns CSR arrays (ptr, inside, outside, J); a move's energy change is
    2 * sum J s_inside s_outside over its slice.
    """
    moves = list(geom.plaquettes) + [geom.logical_z_rows[r] for r in range(geom.L)]
    ptr = [0]
    ins, outs, ws = [], [], []
    for qs in moves:
        fset = set(int(q) for q in qs)
        for q in qs:
            lo, hi = table.indptr[q], table.indptr[q + 1]
            for j, w in zip(table.indices[lo:hi], table.weights[lo:hi]):
                if int(j) not in fset:
                    ins.append(int(q))
                    outs.append(int(j))
                    ws.append(w)
        ptr.append(len(ins))
    return (np.array(ptr, dtype=np.int64), np.array(ins, dtype=np.int64),
            np.array(outs, dtype=np.int64), np.array(ws, dtype=float))


def ohmic_beta(params):
    return (params.lam / params.omega0) ** 2 / (2 * math.pi)


def ohmic_coupling(r, params):
    """Complex bath-induced coupling at separation ``r``."""
    if r <= 0:
        raise ValueError("distance must be positive")
    u = params.light_cone / r
    if u >= 1:
        return complex(0.5 * math.acosh(u), math.pi / 4)
    return 0.5j * math.asin(u)


def couplings_from_ohmic(params, geom=None, M=2):
    """Real parts of the Ohmic coupling at the first ``M`` neighbour distances.

    ``geom`` is accepted for symmetry with other builders; the shell
    distances depend only on the link layout.
    """
    shells = neighbor_shells(M)
    J = []
    for D in shells:
        d = math.sqrt(D) / 2.0
        J.append(ohmic_coupling(d, params).real if d < params.light_cone else 0.0)
    return CouplingSet(tuple(J))


def ohmic_coupling_branches(r, params):
    """Both analytic branches evaluated at ``r`` (used to check continuity)."""
    u = params.light_cone / r
    inside = 0.5 * cmath.acosh(u) + 1j * math.pi / 4
    outside = 0.5j * cmath.asin(u)
    return inside, outside
