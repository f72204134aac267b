import math

import numpy as np
import pytest

from surfmc import (CouplingSet, OhmicParameters, build_lattice, couplings_from_ohmic,
                    delta_energy, flip_line, flip_plaquette, neighbor_table, ohmic_beta,
                    ohmic_coupling, total_energy, vacuum)
from surfmc.hamiltonian import ohmic_coupling_branches

from brute import energy, pair_list


def test_vacuum_energy_L2(model):
    g, t = model(2)
    assert total_energy(np.ones(5, dtype=np.int8), t) == -4.0


@pytest.mark.parametrize("L", [2, 3, 6, 12])
def test_vacuum_energy_extensive(L):
    J = (1.0, 0.3, -0.2, 0.05)
    g = build_lattice(L)
    t = neighbor_table(g, CouplingSet(J))
    P = t.pair_counts()
    assert total_energy(vacuum(g, t), t) == pytest.approx(-sum(j * p for j, p in zip(J, P)))


def test_zero_couplings_zero_energy():
    g = build_lattice(4)
    t = neighbor_table(g, CouplingSet((0.0, 0.0)))
    rng = np.random.default_rng(0)
    s = rng.choice(np.array([-1, 1], dtype=np.int8), g.n_qubits)
    assert total_energy(s, t) == 0.0


def test_energy_matches_brute_and_global_flip(model):
    J = (1.0, 0.4, 0.2)
    g, t = model(4, J)
    pairs = pair_list(g.coords, J, [2, 4, 8, 10])
    rng = np.random.default_rng(1)
    for _ in range(20):
        s = rng.choice(np.array([-1, 1], dtype=np.int8), g.n_qubits)
        e = total_energy(s, t)
        assert e == pytest.approx(energy(s.astype(int), pairs), abs=1e-12)
        assert total_energy(-s, t) == pytest.approx(e, abs=1e-12)


def test_delta_energy_examples(model):
    g, t = model(2)
    v = vacuum(g, t)
    assert delta_energy(v, g.plaquettes[0], t) == 4.0
    assert delta_energy(v, np.arange(g.n_qubits), t) == 0.0
    assert np.all(v.spins == 1)


def test_delta_energy_random_moves_L5(model):
    g, t = model(5, (1.0, 0.2))
    rng = np.random.default_rng(7)
    cfg = vacuum(g, t)
    P = g.n_plaquettes
    for _ in range(10_000):
        k = int(rng.integers(P + g.L))
        qs = g.plaquettes[k] if k < P else g.logical_z_rows[k - P]
        before = total_energy(cfg, t)
        dE = delta_energy(cfg, qs, t)
        if k < P:
            got = flip_plaquette(cfg, k, t)
        else:
            got = flip_line(cfg, k - P, t)
        assert got == pytest.approx(dE, abs=1e-12)
        assert total_energy(cfg, t) - before == pytest.approx(dE, abs=1e-9)
    assert cfg.energy == pytest.approx(total_energy(cfg, t), abs=1e-9)


def test_delta_energy_antisymmetric(model):
    g, t = model(4, (1.0, 0.5))
    cfg = vacuum(g, t)
    rng = np.random.default_rng(3)
    for _ in range(200):
        flip_plaquette(cfg, int(rng.integers(g.n_plaquettes)), t)
    for p in range(g.n_plaquettes):
        d1 = flip_plaquette(cfg, p, t)
        d2 = flip_plaquette(cfg, p, t)
        assert d1 + d2 == pytest.approx(0.0, abs=1e-12)


def test_ohmic_beta():
    assert ohmic_beta(OhmicParameters(1.0, 1.0, 1.0, 1.0)) == pytest.approx(1 / (2 * math.pi))
    assert ohmic_beta(OhmicParameters(0.0, 1.0, 1.0, 1.0)) == 0.0
    assert ohmic_beta(OhmicParameters(2.0, 1.0, 1.0, 1.0)) == pytest.approx(2 / math.pi)


def test_ohmic_coupling_values():
    p = OhmicParameters(1.0, 1.0, 2.0, 1.0)
    assert abs(ohmic_coupling(2.0, p) - 1j * math.pi / 4) < 1e-12
    j = ohmic_coupling(1.0, p)
    assert j.real == pytest.approx(0.658479, abs=1e-6)
    assert j.imag == pytest.approx(0.785398, abs=1e-6)
    j = ohmic_coupling(4.0, p)
    assert j.real == 0.0 and j.imag == pytest.approx(0.261799, abs=1e-6)
    with pytest.raises(ValueError):
        ohmic_coupling(0.0, p)


def test_ohmic_continuity():
    p = OhmicParameters(1.0, 1.0, 1.5, 2.0)
    a, b = ohmic_coupling_branches(p.light_cone, p)
    assert abs(a - 1j * math.pi / 4) < 1e-12
    assert abs(b - 1j * math.pi / 4) < 1e-12
    below = ohmic_coupling(p.light_cone * (1 - 1e-10), p)
    above = ohmic_coupling(p.light_cone * (1 + 1e-10), p)
    assert 0 < below.real < 1e-4
    assert abs(below.imag - above.imag) < 1e-4


def test_couplings_from_ohmic():
    J = couplings_from_ohmic(OhmicParameters(1.0, 1.0, 2.0, 1.0), M=2).J
    assert J[0] == pytest.approx(0.5 * math.acosh(2 * math.sqrt(2)), abs=1e-12)
    assert J[0] == pytest.approx(0.85002, abs=1e-5)
    assert J[1] == pytest.approx(0.5 * math.acosh(2), abs=1e-12)
    assert couplings_from_ohmic(OhmicParameters(1.0, 1.0, 0.5, 1.0), M=4).J == (0.0,) * 4
    J4 = couplings_from_ohmic(OhmicParameters(1.0, 1.0, 3.0, 1.0), M=4).J
    assert all(a >= b for a, b in zip(J4, J4[1:]))


def test_parameter_validation():
    with pytest.raises(ValueError):
        OhmicParameters(1.0, 0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        CouplingSet(())
    with pytest.raises(ValueError):
        CouplingSet((1.0, float("nan")))
