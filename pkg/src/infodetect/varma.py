"""Futures returns implied by the spot ARMA(1,1) and the joint vector form.

With ``F_t = S_t exp(r (T - t))`` and spot returns following
``dS_{t+1} = gamma + rho dS_t + delta e_t + e_{t+1}``, the futures returns obey

    dF_{t+1} = A_{t+1} + rho e^{-2r} dF_t + C_{t+1} (S_t - S_0) + k_{t+1} (delta e_t + e_{t+1})

with ``D = 1 + rho - e^r - rho e^{-r}``, ``k_{t+1} = exp(r (T - t - 1))``,
``A_{t+1} = (gamma + D S_0) k_{t+1}`` and ``C_{t+1} = D k_{t+1}``.  Both
innovations of step ``t + 1`` carry the same factor ``k_{t+1}``.

Vector form (row-vector convention, ``X_t = (dF_t, dS_t)``):

    X_{t+1} = a + X_t B + (sum_{j=1}^{t-1} X_{t-j}) C + delta (xi_t, e_t) + (xi_{t+1}, e_{t+1})

with ``B = [[rho e^{-2r}, 0], [C_{t+1}, rho]]`` and ``C = [[0, 0], [C_{t+1}, 0]]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model_core import Exposure, MarketParams, drift_gamma


@dataclass(frozen=True)
class VarmaSpec:
    a_vec: np.ndarray
    b_mat: np.ndarray
    c_mat: np.ndarray
    delta: float


@dataclass(frozen=True)
class StationarityResult:
    b_eigenvalues: np.ndarray
    c_eigenvalues: np.ndarray
    analytic_b: tuple[float, float]
    analytic_c: tuple[float, float]
    is_stationary: bool

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.concatenate([self.b_eigenvalues, self.c_eigenvalues])


def carry_factor(params: MarketParams) -> float:
    """``1 + rho - e^r - rho e^{-r}``; zero when ``r == 0``."""
    r, rho = params.r, params.rho
    return 1 + rho - math.exp(r) - rho * math.exp(-r)


def futures_coefficients(params: MarketParams, t: int, gamma: float | None = None):
    """``(A_{t+1}, C_{t+1})`` for ``0 <= t < T``; ``gamma`` defaults to the AR(1)-exposure drift."""
    T = params.horizon_T
    if not 0 <= t < T:
        raise IndexError(f"t={t} outside [0, {T})")
    if gamma is None:
        gamma = drift_gamma(params, Exposure.AR1)
    k = math.exp(params.r * (T - t - 1))
    d = carry_factor(params)
    return (gamma + d * params.s0) * k, d * k


def futures_from_spot(spot, params: MarketParams) -> np.ndarray:
    t = np.arange(len(spot))
    return np.asarray(spot, dtype=float) * np.exp(params.r * (params.horizon_T - t))


def futures_return_recursion(spot, eps, params: MarketParams, *, gamma: float, delta: float) -> np.ndarray:
    """Right-hand side of the futures-return recursion at ``t = 1 .. n-1``.

    ``spot`` is ``S_0 .. S_n`` (with ``S_0 == params.s0``) generated from the
    spot ARMA(1,1) with innovations ``eps``; the result aligns with
    ``diff(F)[1:]``, i.e. ``dF_2 .. dF_n``.  The cumulative spot change is a
    running sum.
    """
    spot = np.asarray(spot, dtype=float)
    eps = np.asarray(eps, dtype=float)
    if spot.shape != eps.shape:
        raise ValueError(f"spot and eps lengths differ: {spot.shape} vs {eps.shape}")
    if len(spot) < 3:
        raise ValueError("need at least S_0, S_1, S_2")
    if spot[0] != params.s0:
        raise ValueError("spot[0] must equal params.s0")
    n = len(spot) - 1
    T, r, rho = params.horizon_T, params.r, params.rho
    dF = np.diff(futures_from_spot(spot, params))  # dF_1 .. dF_n
    cum = np.cumsum(np.diff(spot))  # sum_{j<=t} dS_j for t = 1 .. n
    t = np.arange(1, n)
    k_next = np.exp(r * (T - t - 1))
    d = carry_factor(params)
    a_next = (gamma + d * params.s0) * k_next
    c_next = d * k_next
    return a_next + rho * math.exp(-2 * r) * dF[t - 1] + c_next * cum[t - 1] + k_next * (delta * eps[t] + eps[t + 1])


def varma_spec(params: MarketParams, t: int, *, gamma: float, delta: float) -> VarmaSpec:
    """Coefficient set for the step ``t -> t + 1``."""
    a, c = futures_coefficients(params, t, gamma)
    b_mat = np.array([[params.rho * math.exp(-2 * params.r), 0.0], [c, params.rho]])
    c_mat = np.array([[0.0, 0.0], [c, 0.0]])
    return VarmaSpec(np.array([a, gamma]), b_mat, c_mat, delta)


def varma_step(spec: VarmaSpec, x_t, lag_sum, noise_t, noise_next) -> np.ndarray:
    """``X_{t+1}`` from ``X_t``, ``sum_{j=1}^{t-1} X_{t-j}`` and the (xi, e) noise pairs."""
    x_t, lag_sum = np.asarray(x_t, dtype=float), np.asarray(lag_sum, dtype=float)
    return spec.a_vec + x_t @ spec.b_mat + lag_sum @ spec.c_mat + spec.delta * np.asarray(noise_t) + np.asarray(noise_next)


def stationarity_check(params: MarketParams, t: int | None = None) -> StationarityResult:
    """Numerical spectra of ``B`` and ``C`` against ``{rho e^{-2r}, rho}`` and ``{0, 0}``.

    The verdict is ``|rho| < 1``: the ``C`` block is nilpotent and the ``B``
    spectrum is ``rho`` times a factor that only shrinks it for ``r >= 0``.
    Neither spectrum depends on ``t``; the default ``t = T - 1`` keeps the
    carry factor at 1 so large ``r * T`` cannot overflow.
    """
    T = params.horizon_T
    t = T - 1 if t is None else min(max(t, 0), T - 1)
    spec = varma_spec(params, t, gamma=0.0, delta=0.0)
    b_eig = np.sort_complex(np.linalg.eigvals(spec.b_mat).astype(complex))
    c_eig = np.sort_complex(np.linalg.eigvals(spec.c_mat).astype(complex))
    analytic_b = (params.rho * math.exp(-2 * params.r), params.rho)
    return StationarityResult(b_eig, c_eig, analytic_b, (0.0, 0.0), abs(params.rho) < 1)
