"""ARMA(1,1)-with-intercept fits on price differences, single and rolling.

Fits minimise the conditional sum of squares of

    dS_{t+1} = gamma + rho dS_t + delta e_t + e_{t+1}

with the pre-sample innovation set to zero, over the open box
|rho| < 1, |delta| < 1.  The intercept is profiled out analytically and the
remaining two coordinates are searched by Nelder-Mead from a 3x3 grid of
starting points in ``atanh`` coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter

from . import _css
from .errors import EmptyInputError, InsufficientDataError
from .ingest import TickSeries, parse_duration

MIN_OBS = 50
START_GRID = (-0.5, 0.0, 0.5)
_STARTS = np.array([[math.atanh(r), math.atanh(d)] for r in START_GRID for d in START_GRID])

# simplex settings, in atanh coordinates
_STEP = 0.25
_XTOL = 1e-6
_FTOL = 1e-10
_MAXITER = 2000


@dataclass(frozen=True)
class ArmaFit:
    gamma_hat: float
    rho_hat: float
    delta_hat: float
    sigma_eps2_hat: float
    n_obs: int
    converged: bool
    objective: float
    degenerate: bool = False
    price_scale: float = 1.0
    start_ms: int | None = None

    @classmethod
    def missing(cls, n_obs, start_ms=None, price_scale=1.0) -> "ArmaFit":
        nan = float("nan")
        return cls(nan, nan, nan, nan, n_obs, False, nan, False, price_scale, start_ms)


@dataclass
class RollingEstimates:
    instrument: str
    day: date | None
    window_ms: int
    step_ms: int
    fits: list[ArmaFit] = field(default_factory=list)

    def __len__(self):
        return len(self.fits)

    @property
    def starts(self) -> np.ndarray:
        return np.array([f.start_ms for f in self.fits], dtype=np.int64)

    def columns(self):
        """Arrays ``(rho_hat, delta_hat, gamma_hat, converged)`` across windows."""
        return (
            np.array([f.rho_hat for f in self.fits]),
            np.array([f.delta_hat for f in self.fits]),
            np.array([f.gamma_hat for f in self.fits]),
            np.array([f.converged for f in self.fits], dtype=bool),
        )


def css_residuals(diffs, gamma, rho, delta) -> np.ndarray:
    """One-step residuals ``e_2 .. e_n`` with ``e_1 = 0``."""
    y = np.asarray(diffs, dtype=float)
    return lfilter([1.0], [1.0, delta], y[1:] - gamma - rho * y[:-1])


def _scipy_multistart(y):
    obj = lambda p: _css.profile_css(y, math.tanh(p[0]), math.tanh(p[1]))[0]
    best, best_ok = None, False
    for x0 in _STARTS:
        res = minimize(
            obj, x0, method="Nelder-Mead",
            options={"xatol": _XTOL, "fatol": 1e-14, "maxiter": _MAXITER},
        )
        ok = bool(res.success)
        if best is None or (ok and not best_ok) or (ok == best_ok and res.fun < best.fun):
            best, best_ok = res, ok
    return best.x, best.fun, best_ok


def fit_arma11(diffs, *, backend: str = "numba", min_obs: int = MIN_OBS) -> ArmaFit:
    """Fit ARMA(1,1) with intercept to a return series by CSS.

    ``backend="scipy"`` runs the same multi-start search through
    :func:`scipy.optimize.minimize` and is slower; it exists as a cross-check.
    A constant series yields ``rho = delta = 0`` with ``degenerate=True``.
    """
    y = np.asarray(diffs, dtype=float)
    n = y.size
    if n < min_obs:
        raise InsufficientDataError(f"need at least {min_obs} observations, got {n}")
    if not np.all(np.isfinite(y)):
        raise ValueError("returns must be finite")

    loc = float(y.mean())
    scale = float(y.std())
    if scale == 0 or scale <= 1e-14 * max(abs(loc), 1e-300):
        return ArmaFit(loc, 0.0, 0.0, 0.0, n, True, 0.0, degenerate=True)
    z = (y - loc) / scale

    if backend == "numba":
        x, ssr, ok = _css.multistart(z, _STARTS, _STEP, _XTOL, _FTOL, _MAXITER)
    elif backend == "scipy":
        x, ssr, ok = _scipy_multistart(z)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    rho, delta = math.tanh(x[0]), math.tanh(x[1])
    ssr, g = _css.profile_css(z, rho, delta)
    gamma = g * scale + loc * (1 - rho)
    sigma2 = ssr / (n - 1) * scale**2
    return ArmaFit(gamma, rho, delta, sigma2, n, bool(ok), ssr * scale**2, degenerate=bool(sigma2 == 0))


def window_starts(t_first: int, t_last: int, window_ms: int, step_ms: int) -> np.ndarray:
    """Start times ``t_first + k*step`` of every window with ``start + window <= t_last``."""
    span = t_last - t_first
    if span < window_ms:
        return np.empty(0, dtype=np.int64)
    k = (span - window_ms) // step_ms
    return t_first + step_ms * np.arange(k + 1, dtype=np.int64)


def rolling_fit(
    series: TickSeries,
    window="1h",
    step="1m",
    *,
    min_obs: int = MIN_OBS,
    backend: str = "numba",
) -> RollingEstimates:
    """One :class:`ArmaFit` per window position.

    Window ``k`` holds every tick with ``start_k <= t <= start_k + window``
    and is fitted on the differences of those prices.  Windows with fewer than
    ``min_obs`` differences get a non-converged placeholder.
    """
    if len(series) == 0:
        raise EmptyInputError(f"{series.instrument}: empty series")
    w, s = parse_duration(window), parse_duration(step)
    ts, px = series.timestamps, series.prices
    starts = window_starts(int(ts[0]), int(ts[-1]), w, s)
    lo = np.searchsorted(ts, starts, side="left")
    hi = np.searchsorted(ts, starts + w, side="right")
    out = RollingEstimates(series.instrument, series.day, w, s)
    for start, i0, i1 in zip(starts.tolist(), lo.tolist(), hi.tolist()):
        prices = px[i0:i1]
        n = max(len(prices) - 1, 0)
        price_scale = float(prices.mean()) if len(prices) else 1.0
        if n < min_obs:
            out.fits.append(ArmaFit.missing(n, start, price_scale))
            continue
        f = fit_arma11(np.diff(prices), backend=backend, min_obs=min_obs)
        out.fits.append(
            ArmaFit(
                f.gamma_hat, f.rho_hat, f.delta_hat, f.sigma_eps2_hat, f.n_obs, f.converged,
                f.objective, f.degenerate, price_scale, start,
            )
        )
    return out
