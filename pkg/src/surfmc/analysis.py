"""Observables derived from sampled series: |B/A|, fidelity, heat capacity, scaling fits."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

X_SCAN = (-3.0, -0.2)


class UnbracketedPeak(ValueError):
    pass


@dataclass(frozen=True)
class ObservablePoint:
    L: int
    beta: float
    name: str
    mean: float
    stderr: float
    n_samples: int = 0
    n_bins: int = 0
    couplings: tuple = ()
    syndrome: str = "none"
    flags: tuple = ()
    signed: float = None


@dataclass(frozen=True)
class ScalingFit:
    beta_c_inf: float
    y: float
    x: float
    x_free: bool
    residual_norm: float
    beta_c_inf_err: float = math.nan
    y_err: float = math.nan
    peaks: dict = field(default_factory=dict)

    def predict(self, L):
        return self.beta_c_inf - self.y * np.asarray(L, dtype=float) ** self.x

    def to_dict(self):
        return dict(beta_c_inf=self.beta_c_inf, beta_c_inf_err=self.beta_c_inf_err,
                    y=self.y, y_err=self.y_err, x=self.x, x_free=self.x_free,
                    residual_norm=self.residual_norm,
                    peaks={str(k): list(v) for k, v in self.peaks.items()})


def _point(acc, name, mean, stats, label=None, signed=None, flags=()):
    meta = acc.meta
    return ObservablePoint(L=meta.get("L"), beta=meta.get("beta"), name=name,
                           mean=float(mean), stderr=float(stats[1]),
                           n_samples=acc.n_samples, n_bins=int(stats[2]),
                           couplings=meta.get("J", ()),
                           syndrome=label or (acc.strings[0] if acc.strings else "none"),
                           flags=tuple(flags), signed=signed)


def ratio_BA(acc, label=None):
    """|<S c>/<S>|, the relative weight of the logically flipped component."""
    from .sampler import estimate
    st = estimate(acc, "ratio", label)
    return _point(acc, "abs_BA_ratio", abs(st.mean), (st.mean, st.stderr, st.n_bins),
                  label, signed=st.mean, flags=st.flags)


def fidelity_from_ratio(r):
    if r < 0:
        raise ValueError("ratio must be non-negative")
    return 1.0 / math.sqrt(1.0 + r * r)


def heat_capacity(acc, beta, n_qubits):
    """beta^2 (<E^2> - <E>^2) / N with a jackknife error."""
    from .sampler import jackknife
    E = acc.series("E")
    E = E - E[0]            # variance is shift invariant; keeps E^2 small
    stats = jackknife(lambda e, e2: beta ** 2 * (e2 - e * e) / n_qubits, [E, E * E])
    return _point(acc, "heat_capacity", stats[0], stats)


def _xy(points):
    pts = sorted(points, key=lambda p: p.beta)
    b = np.array([p.beta for p in pts], dtype=float)
    v = np.array([p.mean for p in pts], dtype=float)
    e = np.array([p.stderr for p in pts], dtype=float)
    return b, v, e


def peak_beta(points, window=3):
    """Location of the maximum of an observable over a beta grid.

    A parabola is put through the largest point and its neighbours (or a
    weighted least-squares parabola over ``window`` points); the error is
    propagated linearly from the point errors.  Returns (beta, err).
    """
    b, v, e = _xy(points)
    if len(b) < 5:
        raise ValueError("need at least 5 grid points")
    k = int(np.argmax(v))
    if k == 0 or k == len(b) - 1:
        raise UnbracketedPeak(f"maximum at grid edge beta={b[k]}")
    half = max(1, window // 2)
    lo, hi = max(0, k - half), min(len(b), k + half + 1)
    bs, vs, es = b[lo:hi], v[lo:hi], e[lo:hi]
    w = np.where(es > 0, 1.0 / np.where(es > 0, es, 1.0), 1.0)

    def vertex(vals):
        if len(bs) == 3:
            a2, a1, _ = np.polyfit(bs - b[k], vals, 2)
        else:
            a2, a1, _ = np.polyfit(bs - b[k], vals, 2, w=w)
        if a2 >= 0:
            raise UnbracketedPeak("local fit is not concave")
        return b[k] - a1 / (2 * a2)

    x0 = vertex(vs)
    var = 0.0
    for i in range(len(vs)):
        if es[i] == 0:
            continue
        h = es[i] * 1e-3
        d = vs.copy()
        d[i] += h
        var += ((vertex(d) - x0) / h * es[i]) ** 2
    return float(x0), float(math.sqrt(var))


def crossing_beta(points, level=0.5):
    """First beta where the curve rises through ``level`` (linear interpolation).

    Returns (beta, err, slope).
    """
    b, v, e = _xy(points)
    for i in range(len(b) - 1):
        if v[i] < level <= v[i + 1]:
            d = b[i + 1] - b[i]
            dv = v[i + 1] - v[i]
            x = b[i] + d * (level - v[i]) / dv
            g0 = d * (level - v[i + 1]) / dv ** 2
            g1 = -d * (level - v[i]) / dv ** 2
            err = math.hypot(g0 * e[i], g1 * e[i + 1])
            return float(x), float(err), float(dv / d)
    raise ValueError(f"curve never crosses {level}")


def _linear_fit(Ls, beta, w, x):
    A = np.stack([np.ones_like(Ls), -Ls ** x], axis=1)
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(A * sw[:, None], beta * sw, rcond=None)
    r = (beta - A @ coef) * sw
    return coef, float(r @ r), A


def fit_beta_c(peaks, x_mode="fixed", x=-1.0):
    """Weighted fit of beta_c(L) = beta_c(inf) - y L^x.

    ``peaks`` maps L -> (beta_peak, err).  With ``x_mode="fixed"`` the
    problem is linear; with ``"free"`` x is scanned over [-3, -0.2] and the
    best point polished by nonlinear least squares.
    """
    if len(peaks) < 3:
        raise ValueError("need at least 3 distinct L values")
    items = sorted(peaks.items())
    Ls = np.array([float(k) for k, _ in items])
    beta = np.array([float(v[0]) for _, v in items])
    err = np.array([float(v[1]) if len(v) > 1 else 0.0 for _, v in items])
    w = 1.0 / err ** 2 if np.all(err > 0) else np.ones_like(beta)

    if x_mode == "fixed":
        coef, chi2, A = _linear_fit(Ls, beta, w, x)
        cov = np.linalg.pinv((A * w[:, None]).T @ A)
        return ScalingFit(float(coef[0]), float(coef[1]), float(x), False,
                          math.sqrt(chi2), float(math.sqrt(cov[0, 0])),
                          float(math.sqrt(cov[1, 1])), dict(items))
    if x_mode != "free":
        raise ValueError(f"unknown x_mode {x_mode!r}")

    grid = np.linspace(*X_SCAN, 2801)
    chi = [_linear_fit(Ls, beta, w, xx)[1] for xx in grid]
    x0 = grid[int(np.argmin(chi))]
    (b0, y0), _, _ = _linear_fit(Ls, beta, w, x0)
    sw = np.sqrt(w)

    def resid(p):
        return (beta - (p[0] - p[1] * Ls ** p[2])) * sw

    sol = least_squares(resid, [b0, y0, x0], bounds=([-np.inf, -np.inf, X_SCAN[0]],
                                                     [np.inf, np.inf, X_SCAN[1]]),
                        xtol=1e-15, ftol=1e-15, gtol=1e-15)
    bc, yy, xx = sol.x
    try:
        cov = np.linalg.pinv(sol.jac.T @ sol.jac)
        errs = np.sqrt(np.abs(np.diag(cov)))
    except np.linalg.LinAlgError:
        errs = [math.nan] * 3
    return ScalingFit(float(bc), float(yy), float(xx), True,
                      float(np.linalg.norm(sol.fun)), float(errs[0]), float(errs[1]),
                      dict(items))
