"""Restricted x-basis spin configurations (every star parity +1).

A configuration is reached from the all-+1 vacuum by plaquette flips
(class I) and, optionally, one flip of a logical-Z row (class II).  Both
moves preserve every star parity, so the constraint never has to be
re-imposed.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .hamiltonian import total_energy


@dataclass
class SpinConfiguration:
    spins: np.ndarray       # int8, +1/-1 per qubit
    energy: float
    class_label: int
    geom: object

    def copy(self):
        return SpinConfiguration(self.spins.copy(), self.energy,
                                 self.class_label, self.geom)

    def recomputed_class(self, column=0):
        return int(np.prod(self.spins[self.geom.logical_x_columns[column]]))


def vacuum(geom, table):
    spins = np.ones(geom.n_qubits, dtype=np.int8)
    return SpinConfiguration(spins, total_energy(spins, table), 1, geom)


def _flip(config, qs, table):
    mark = np.zeros(len(config.spins), dtype=np.int8)
    dE = _kernels.delta_flip(config.spins, qs, len(qs), table.indptr,
                             table.indices, table.weights, mark)
    _kernels.apply_flip(config.spins, qs, len(qs))
    config.energy += dE
    return float(dE)


def flip_plaquette(config, p, table):
    """Apply B_p; returns the energy change."""
    return _flip(config, config.geom.plaquettes[p], table)


def flip_line(config, row, table):
    """Apply the logical Z along ``row``; toggles the class label."""
    geom = config.geom
    if not 0 <= row < geom.L:
        raise ValueError(f"row {row} outside [0, {geom.L})")
    dE = _flip(config, geom.logical_z_rows[row], table)
    config.class_label = -config.class_label
    return dE


def string_value(config, string):
    qs = getattr(string, "qubits", string)
    if len(qs) == 0:
        return 1
    return int(np.prod(config.spins[np.asarray(qs)]))


def validate_stars(config, geom=None):
    geom = geom or config.geom
    spins = config.spins
    return all(np.prod(spins[s]) == 1 for s in geom.stars)
