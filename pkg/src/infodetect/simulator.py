"""Synthetic spot and futures paths under informed, null and mixed regimes."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import lfilter

from .errors import PathDegenerateWarning
from .model_core import Exposure, MarketParams, impact_lambda


@dataclass(frozen=True)
class SimConfig:
    """One simulated path.

    ``informed_window`` is an inclusive ``(start, end)`` step range during
    which the informed flow reaches the market; ``None`` means the whole path.
    """

    params: MarketParams
    variant: Exposure = Exposure.AR1
    n_steps: int = 28_800
    seed: int = 0
    informed_window: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Exposure(self.variant))
        if self.n_steps < 2:
            raise ValueError("n_steps must be >= 2")
        if self.informed_window is not None:
            a, b = self.informed_window
            if not 0 <= a <= b <= self.n_steps:
                raise ValueError(f"informed_window {self.informed_window} outside [0, {self.n_steps}]")


@dataclass
class SimPath:
    spot: np.ndarray
    futures: np.ndarray
    theta: np.ndarray
    x_flow: np.ndarray
    labels: np.ndarray
    lambda_: float
    config: SimConfig
    warnings: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.spot)


def _stationary_start(rng, params, variant):
    """Initial ``theta_0`` (and ``z_0``) drawn from the stationary law when it exists."""
    rho, sz, tb = params.rho, params.sigma_z, params.theta_bar
    z0 = rng.normal(0.0, sz)
    if abs(rho) >= 1:
        return tb, z0
    mean = tb / (1 - rho)
    if variant is Exposure.AR1:
        return mean + rng.normal(0.0, sz / math.sqrt(1 - rho**2)), z0
    # theta_0 - mean = z_0 + sum_{j>=1} rho^(j-1) (1 + rho) z_{-j}
    tail_sd = sz * math.sqrt((1 + rho) / (1 - rho))
    return mean + z0 + rng.normal(0.0, tail_sd), z0


def _draw_theta(rng, config):
    n = config.n_steps
    params, variant = config.params, config.variant
    if variant is Exposure.NULL:
        return np.zeros(n + 1)
    theta0, z0 = _stationary_start(rng, params, variant)
    z = rng.normal(0.0, params.sigma_z, n)
    drive = params.theta_bar + z
    if variant is Exposure.ARMA12:
        drive[0] += z0
        drive[1:] += z[:-1]
    theta = np.empty(n + 1)
    theta[0] = theta0
    theta[1:], _ = lfilter([1.0], [1.0, -params.rho], drive, zi=[params.rho * theta0])
    return theta


def simulate_theta(config: SimConfig) -> np.ndarray:
    """Informed flow ``theta_0 .. theta_n``; all zeros for the null regime."""
    return _draw_theta(np.random.default_rng(config.seed), config)


def _labels(config):
    n = config.n_steps
    labels = np.zeros(n + 1, dtype=bool)
    if config.variant is Exposure.NULL:
        return labels
    a, b = config.informed_window if config.informed_window is not None else (0, n)
    labels[a : b + 1] = True
    return labels


def simulate_path(config: SimConfig) -> SimPath:
    """Spot by ``S_t = S_{t-1} + lambda X_t`` and futures by ``F_t = S_t exp(r (T - t))``.

    The null regime keeps the AR(1)-exposure ``lambda`` of ``config.params``
    so that informed and null days share market depth.
    """
    params = config.params
    rng = np.random.default_rng(config.seed)
    theta = _draw_theta(rng, config)
    u = rng.normal(0.0, params.sigma_u, config.n_steps + 1)
    lam_variant = Exposure.ARMA12 if config.variant is Exposure.ARMA12 else Exposure.AR1
    lam = impact_lambda(params, lam_variant)
    labels = _labels(config)

    x = params.beta * theta * labels + u
    steps = lam * x
    steps[0] = params.s0
    spot = np.cumsum(steps)
    t = np.arange(config.n_steps + 1)
    futures = spot * np.exp(params.r * (params.horizon_T - t))

    notes = []
    bad = np.flatnonzero(spot <= 0)
    if bad.size:
        msg = f"spot price reached {spot[bad[0]]:.6g} at step {bad[0]}"
        notes.append(msg)
        warnings.warn(msg, PathDegenerateWarning, stacklevel=2)
    return SimPath(spot, futures, theta, x, labels, lam, config, notes)


def simulate_arma11_spot(gamma, rho, delta, sigma_eps, n_steps, s0=100.0, seed=0):
    """Spot path whose differences follow ``dS_{t+1} = gamma + rho dS_t + delta e_t + e_{t+1}``.

    Returns ``(spot, eps)`` with ``len == n_steps + 1``.  ``dS_0`` and the
    pre-sample innovation are zero; ``eps[0]`` is the first innovation.
    """
    rng = np.random.default_rng(seed)
    eps = rng.normal(0.0, sigma_eps, n_steps + 1)
    # dS_t for t = 1..n: gamma + rho dS_{t-1} + delta eps_{t-1} + eps_t
    drive = gamma + eps[1:] + delta * eps[:-1]
    ds = lfilter([1.0], [1.0, -rho], drive)
    steps = np.concatenate([[s0], ds])
    return np.cumsum(steps), eps


def export_ticks(path: SimPath, file, leg: str = "spot", *, start_ms: int = 1_390_986_000_000, tick_ms: int = 1000):
    """Write one leg as ``timestamp,price,informed`` CSV with epoch-millisecond stamps.

    Prices are written with ``repr`` so that parsing reproduces them exactly.
    """
    prices = {"spot": path.spot, "futures": path.futures}[leg]
    file = Path(file)
    try:
        with file.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["timestamp", "price", "informed"])
            for i, (p, lab) in enumerate(zip(prices.tolist(), path.labels.tolist())):
                w.writerow([start_ms + i * tick_ms, repr(p), int(lab)])
    except OSError as exc:
        raise OSError(f"cannot write ticks to {file}: {exc}") from exc
    return file
