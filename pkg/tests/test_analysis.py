import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from surfmc import (ObservablePoint, crossing_beta, fidelity_from_ratio, fit_beta_c,
                    heat_capacity, peak_beta)
from surfmc.analysis import UnbracketedPeak
from surfmc.oracle import enumerate_spectrum, observables
from surfmc.sampler import Accumulator


def pts(betas, values, errs=None):
    errs = np.zeros(len(betas)) if errs is None else errs
    return [ObservablePoint(2, float(b), "x", float(v), float(e))
            for b, v, e in zip(betas, values, errs)]


@pytest.mark.parametrize("r, F", [(0, 1.0), (1, 1 / math.sqrt(2)), (3, 1 / math.sqrt(10))])
def test_fidelity_table(r, F):
    assert fidelity_from_ratio(r) == pytest.approx(F, abs=1e-12)


@given(st.floats(0, 1e3), st.floats(0, 1e3))
def test_fidelity_monotone(a, b):
    lo, hi = sorted((a, b))
    assert 0 < fidelity_from_ratio(hi) <= fidelity_from_ratio(lo) <= 1
    if hi <= 1:
        assert fidelity_from_ratio(hi) >= 1 / math.sqrt(2) - 1e-15


def test_fidelity_negative():
    with pytest.raises(ValueError):
        fidelity_from_ratio(-0.1)


@pytest.mark.parametrize("window", [3, 5, 7])
def test_parabola_vertex(window):
    b = np.linspace(0.1, 0.4, 13)
    v = 3.0 - 40.0 * (b - 0.2371) ** 2
    x, err = peak_beta(pts(b, v, np.full(13, 0.01)), window=window)
    assert abs(x - 0.2371) < 1e-12
    assert err > 0


def test_monotone_is_unbracketed():
    b = np.linspace(0.1, 0.4, 7)
    with pytest.raises(UnbracketedPeak):
        peak_beta(pts(b, b ** 2))
    with pytest.raises(UnbracketedPeak):
        peak_beta(pts(b, -b))
    with pytest.raises(ValueError):
        peak_beta(pts(b[:4], [0, 1, 0.5, 0]))


def test_oracle_peak_within_grid_spacing(model):
    g, t = model(2)
    spec = enumerate_spectrum(g, t)
    grid = np.round(np.arange(0.05, 0.9 + 1e-9, 0.05), 10)
    curve = [observables(spec, b).heat_capacity for b in grid]
    x, _ = peak_beta(pts(grid, curve))
    dense = np.linspace(0.05, 0.9, 20001)
    ref = dense[int(np.argmax([observables(spec, b).heat_capacity for b in dense]))]
    assert abs(x - ref) < 0.05


def _acc_E(E):
    z = np.zeros(len(E), dtype=np.int8)
    return Accumulator(("none",), {"c": [z], "E": [np.asarray(E, float)], "m": [z],
                                   "S": [np.ones((len(E), 1), dtype=np.int8)]},
                       meta=dict(L=2, beta=0.25))


def test_heat_capacity_formula():
    E = np.random.default_rng(0).normal(-10.0, 2.0, size=4096)
    p = heat_capacity(_acc_E(E), 0.25, 5)
    assert p.mean == pytest.approx(0.25 ** 2 * E.var() / 5, rel=1e-10)
    assert p.stderr > 0
    assert heat_capacity(_acc_E(E), 0.0, 5).mean == 0.0
    assert heat_capacity(_acc_E(np.full(256, 3.0)), 0.5, 5).mean == 0.0


def test_crossing():
    b = np.linspace(0.0, 0.4, 9)
    x, err, slope = crossing_beta(pts(b, b * 2.0, np.full(9, 0.01)))
    assert x == pytest.approx(0.25) and slope == pytest.approx(2.0) and err > 0
    with pytest.raises(ValueError):
        crossing_beta(pts(b, np.zeros(9)))


def test_fit_exact_recovery():
    peaks = {L: (0.217 - 0.3 / L, 1e-3) for L in (8, 12, 16, 20)}
    f = fit_beta_c(peaks)
    assert abs(f.beta_c_inf - 0.217) < 1e-10 and abs(f.y - 0.3) < 1e-10 and f.x == -1
    ff = fit_beta_c(peaks, "free")
    assert abs(ff.beta_c_inf - 0.217) < 1e-10
    assert abs(ff.y - 0.3) < 1e-10 and abs(ff.x + 1) < 1e-10
    assert np.allclose(f.predict([8, 12, 16, 20]), [v[0] for v in peaks.values()])


def test_fit_free_x_minus_two():
    rng = np.random.default_rng(3)
    Ls = [8, 12, 16, 20, 24, 32]
    peaks = {L: (0.217 - 3.0 * L ** -2.0 + rng.normal(0, 2e-4), 2e-4) for L in Ls}
    f = fit_beta_c(peaks, "free")
    assert -2.2 <= f.x <= -1.8


def test_fit_free_noisy_minus_one():
    rng = np.random.default_rng(4)
    peaks = {L: (0.217 + 0.4 / L + rng.normal(0, 5e-4), 5e-4) for L in (8, 12, 16, 20)}
    f = fit_beta_c(peaks, "free")
    assert -1.5 <= f.x <= -0.7


def test_fit_normal_equations():
    peaks = {8: (0.259, 0.002), 12: (0.241, 0.001), 16: (0.231, 0.0015), 20: (0.228, 0.001)}
    f = fit_beta_c(peaks)
    L = np.array(sorted(peaks), float)
    y = np.array([peaks[k][0] for k in sorted(peaks)])
    w = np.array([peaks[k][1] ** -2 for k in sorted(peaks)])
    A = np.stack([np.ones_like(L), -1 / L], axis=1)
    r = y - A @ np.array([f.beta_c_inf, f.y])
    assert np.all(np.abs(A.T @ (w * r)) <= 1e-10 * np.abs(A.T @ (w * y)).max())
    assert f.residual_norm == pytest.approx(math.sqrt(np.sum(w * r * r)))


def test_fit_needs_three():
    with pytest.raises(ValueError):
        fit_beta_c({8: (0.25, 0.01), 12: (0.24, 0.01)})
