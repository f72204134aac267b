import numpy as np
import pytest

from surfmc import (SyndromeSpec, flip_line, flip_plaquette, string_value, syndrome_string,
                    total_energy, vacuum, validate_stars)


def test_vacuum(model):
    for L in (2, 3, 7):
        g, t = model(L)
        v = vacuum(g, t)
        assert v.class_label == 1 and validate_stars(v)
        assert v.energy == total_energy(v, t)
    assert vacuum(*model(2)).energy == -4.0


def test_flip_examples_L2(model):
    g, t = model(2)
    v = vacuum(g, t)
    assert flip_plaquette(v, 0, t) == 4.0 and v.energy == 0.0
    assert v.class_label == 1
    v = vacuum(g, t)
    assert flip_line(v, 0, t) == 4.0 and v.energy == 0.0
    assert v.class_label == -1


def test_involutions(model):
    g, t = model(4, (1.0, 0.3))
    rng = np.random.default_rng(0)
    cfg = vacuum(g, t)
    for _ in range(50):
        flip_plaquette(cfg, int(rng.integers(g.n_plaquettes)), t)
    ref = cfg.copy()
    for p in range(g.n_plaquettes):
        flip_plaquette(cfg, p, t)
        flip_plaquette(cfg, p, t)
    for r in range(g.L):
        flip_line(cfg, r, t)
        flip_line(cfg, r, t)
    assert np.array_equal(cfg.spins, ref.spins)
    assert cfg.energy == pytest.approx(ref.energy, abs=1e-12)
    assert cfg.class_label == ref.class_label


def test_bad_row(model):
    g, t = model(3)
    with pytest.raises(ValueError):
        flip_line(vacuum(g, t), 3, t)


@pytest.mark.parametrize("L", [2, 3, 5, 8])
def test_random_moves_closure(model, L):
    g, t = model(L, (1.0, 0.2))
    rng = np.random.default_rng(L)
    cfg = vacuum(g, t)
    n = 20_000 if L < 8 else 5_000
    for i in range(n):
        k = int(rng.integers(g.n_plaquettes + g.L))
        if k < g.n_plaquettes:
            flip_plaquette(cfg, k, t)
        else:
            flip_line(cfg, k - g.n_plaquettes, t)
        if i % 97 == 0:
            assert validate_stars(cfg)
            assert all(cfg.recomputed_class(c) == cfg.class_label for c in range(L))
    assert validate_stars(cfg)
    e = total_energy(cfg, t)
    assert abs(cfg.energy - e) <= 1e-9 * max(1.0, abs(e))


def test_single_spin_breaks_stars(model):
    g, t = model(3)
    v = vacuum(g, t)
    v.spins[0] = -1
    assert not validate_stars(v)


def test_string_value(model):
    g, t = model(4)
    v = vacuum(g, t)
    s = syndrome_string(g, SyndromeSpec(((1, 2),)))
    assert string_value(v, s) == 1
    assert string_value(v, []) == 1
    # each plaquette overlaps the string evenly except the endpoint plaquette
    end = g.plaquette_index(1, 2)
    rng = np.random.default_rng(5)
    for _ in range(200):
        p = int(rng.integers(g.n_plaquettes))
        before = string_value(v, s)
        flip_plaquette(v, p, t)
        assert string_value(v, s) == (-before if p == end else before)


@pytest.mark.parametrize("L", [2, 3])
def test_reachability(model, L):
    g, t = model(L)
    P = g.n_plaquettes
    seen = set()
    for mask in range(2 ** P):
        for line in (False, True):
            cfg = vacuum(g, t)
            for p in range(P):
                if mask >> p & 1:
                    flip_plaquette(cfg, p, t)
            if line:
                flip_line(cfg, 0, t)
            assert validate_stars(cfg)
            seen.add(cfg.spins.tobytes())
    assert len(seen) == 2 ** (L * (L - 1) + 1)
    # N - number of independent stars
    assert len(seen) == 2 ** (g.n_qubits - g.n_star)
