"""Closed-form mathematics of the informed-trading price-impact model.

Informed flow ``theta_t`` follows an AR(1) (or ARMA(1,2)) recursion, the
total flow ``X_t = beta * theta_t + u_t`` moves the spot price through
``S_t = S_{t-1} + lambda * X_t``, and the spot returns then follow an
ARMA(1,1) with intercept ``gamma``, AR coefficient ``rho`` and MA coefficient
``delta``.

Two independent routes to ``(delta, sigma_eps2)`` live here:

* closed forms (:func:`noise_structure_ar1`, :func:`noise_structure_arma12`),
* a brute-force oracle (:func:`oracle_delta`) that sums the MA(infinity)
  weights of the structural model to get the lag-0 and lag-1 autocovariances
  of the returns, then solves the ARMA(1,1) autocorrelation equation for the
  invertible MA root by grid scan plus bisection.

Sign convention: the MA term enters as ``+ delta * eps_{t-1}``.  The closed
forms return the invertible root under that convention.  The literal,
sign-flipped expressions are kept in :func:`noise_structure_as_printed` as a
negative control for the verification suite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    DegenerateParametersError,
    NoInvertibleRootError,
    RemovableSingularityError,
    SingularParametersError,
)


class Exposure(str, enum.Enum):
    """Informed-flow regime."""

    AR1 = "ar1"
    ARMA12 = "arma12"
    NULL = "null"


@dataclass(frozen=True)
class MarketParams:
    """Structural parameters of the market model.

    ``r`` is a per-step rate and ``horizon_T`` a step count.  Non-stationary
    ``rho`` is allowed so such paths can be simulated on purpose; check
    :attr:`is_stationary`.
    """

    rho: float
    beta: float = 1.0
    sigma_z: float = 1.0
    sigma_u: float = 1.0
    theta_bar: float = 0.0
    r: float = 0.0
    horizon_T: int = 28_800
    s0: float = 100.0
    s_target: float | None = None

    def __post_init__(self):
        if self.sigma_z < 0 or self.sigma_u < 0:
            raise ValueError("sigma_z and sigma_u must be non-negative")
        if self.sigma_z == 0 and self.sigma_u == 0:
            raise ValueError("sigma_z and sigma_u cannot both be zero")
        if int(self.horizon_T) != self.horizon_T or self.horizon_T < 2:
            raise ValueError("horizon_T must be an integer >= 2")
        if not self.s0 > 0:
            raise ValueError("s0 must be positive")
        if self.s_target is None:
            object.__setattr__(self, "s_target", float(self.s0))
        object.__setattr__(self, "horizon_T", int(self.horizon_T))

    @property
    def is_stationary(self) -> bool:
        return abs(self.rho) < 1

    def replace(self, **changes) -> "MarketParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class NoiseStructure:
    """Reduced-form ARMA(1,1) coefficients implied by :class:`MarketParams`."""

    lambda_: float
    gamma: float
    delta: float
    sigma_eps2: float
    variant: Exposure


def _as_variant(variant) -> Exposure:
    v = Exposure(variant)
    if v is Exposure.NULL:
        raise ValueError("closed forms are defined for the AR1 and ARMA12 exposures only")
    return v


def impact_lambda(params: MarketParams, variant=Exposure.AR1, *, beta_squared: bool = False) -> float:
    """Market-depth coefficient.

    ``beta * sigma_z**2 / (beta * sigma_z**2 + sigma_u**2)`` for the AR(1)
    exposure and ``4 beta sigma_z**2 / (4 beta sigma_z**2 + sigma_u**2)`` for
    the ARMA(1,2) exposure.  ``beta_squared=True`` swaps ``beta`` for
    ``beta**2``, the dimensionally consistent reading of ``cov/var``.
    """
    v = _as_variant(variant)
    b = params.beta**2 if beta_squared else params.beta
    k = 4.0 if v is Exposure.ARMA12 else 1.0
    num = k * b * params.sigma_z**2
    den = num + params.sigma_u**2
    if den == 0:
        raise DegenerateParametersError("impact coefficient denominator is zero")
    return num / den


def drift_gamma(params: MarketParams, variant=Exposure.AR1, *, lambda_: float | None = None) -> float:
    """Intercept ``lambda * beta * (1 - rho) * (S_T - S_0) / T``."""
    lam = impact_lambda(params, variant) if lambda_ is None else lambda_
    return lam * params.beta * (1 - params.rho) * (params.s_target - params.s0) / params.horizon_T


def _require_stationary(params):
    if not params.is_stationary:
        raise DegenerateParametersError(f"closed forms need |rho| < 1, got rho={params.rho}")


def noise_structure_ar1(params: MarketParams, *, lambda_: float | None = None) -> NoiseStructure:
    """Closed-form ``(lambda, gamma, delta, sigma_eps2)`` for the AR(1) exposure.

    Raises :class:`RemovableSingularityError` at ``rho == 0``; the limit is
    available from :func:`delta_limit`.  With ``sigma_u == 0`` the moving
    average part vanishes and ``delta`` is exactly zero.
    """
    _require_stationary(params)
    rho, beta, sz, su = params.rho, params.beta, params.sigma_z, params.sigma_u
    if rho == 0:
        raise RemovableSingularityError("delta has a (2 rho)^-1 factor; use delta_limit() at rho = 0")
    lam = impact_lambda(params, Exposure.AR1) if lambda_ is None else lambda_
    if lam == 0:
        raise DegenerateParametersError("lambda = 0: prices never move")
    gamma = drift_gamma(params, Exposure.AR1, lambda_=lam)
    l2 = lam * lam
    informed = l2 * beta**2 * sz**2
    if su == 0:
        return NoiseStructure(lam, gamma, 0.0, informed, Exposure.AR1)
    noise = l2 * su**2
    root = math.sqrt((noise * (1 - rho) ** 2 + informed) * (noise * (1 + rho) ** 2 + informed))
    delta = (root - informed) / (2 * rho * noise) - (1 + rho**2) / (2 * rho)
    sigma_eps2 = (informed + (1 - rho**2) * noise) / (1 + delta**2 + 2 * rho * delta)
    return NoiseStructure(lam, gamma, delta, sigma_eps2, Exposure.AR1)


def noise_structure_arma12(params: MarketParams, *, lambda_: float | None = None) -> NoiseStructure:
    """Closed-form coefficients for the ARMA(1,2) exposure.

    ``sigma_eps2 = lambda**2 beta**2 sigma_z**2 (1 + rho)**2 / ((rho + delta)(1 + rho delta))``
    which is the lag-1 autocovariance match solved for the innovation variance.
    """
    _require_stationary(params)
    rho, beta, sz, su = params.rho, params.beta, params.sigma_z, params.sigma_u
    lam = impact_lambda(params, Exposure.ARMA12) if lambda_ is None else lambda_
    gamma = drift_gamma(params, Exposure.ARMA12, lambda_=lam)
    b2s2 = beta**2 * sz**2
    den_delta = 2 * b2s2 - 2 * rho * su**2
    if den_delta == 0:
        raise SingularParametersError("2*rho*sigma_u^2 - 2*beta^2*sigma_z^2")
    num = su**2 * (1 + rho**2) + 2 * b2s2 - (1 + rho) * su * math.sqrt(4 * b2s2 + su**2 * (1 - rho) ** 2)
    delta = num / den_delta
    den_sigma = rho * delta**2 + rho**2 * delta + rho + delta
    if den_sigma == 0:
        raise SingularParametersError("rho*delta^2 + rho^2*delta + rho + delta")
    sigma_eps2 = lam**2 * b2s2 * (1 + rho) ** 2 / den_sigma
    return NoiseStructure(lam, gamma, delta, sigma_eps2, Exposure.ARMA12)


def noise_structure(params: MarketParams, variant=Exposure.AR1, *, lambda_: float | None = None) -> NoiseStructure:
    if _as_variant(variant) is Exposure.AR1:
        return noise_structure_ar1(params, lambda_=lambda_)
    return noise_structure_arma12(params, lambda_=lambda_)


def noise_structure_as_printed(params: MarketParams, variant=Exposure.AR1) -> NoiseStructure:
    """Literal transcription of the published coefficient formulas.

    ``delta`` here is the negative of the invertible MA root and the ARMA(1,2)
    variance carries ``(1 + rho**2)`` instead of ``(1 + rho)**2``.  Kept only
    as a negative control: the oracle must reject it.
    """
    v = _as_variant(variant)
    rho, beta, sz, su = params.rho, params.beta, params.sigma_z, params.sigma_u
    lam = impact_lambda(params, v)
    gamma = drift_gamma(params, v, lambda_=lam)
    b2s2 = beta**2 * sz**2
    if v is Exposure.AR1:
        l2 = lam * lam
        delta = (1 + rho**2) / (2 * rho) + (
            l2 * b2s2
            - math.sqrt((l2 * su**2 * (1 - rho) ** 2 + l2 * b2s2) * (l2 * su**2 * (1 + rho) ** 2 + l2 * b2s2))
        ) / (2 * rho * l2 * su**2)
        sigma_eps2 = (l2 * b2s2 + (1 - rho**2) * l2 * su**2) / (1 + delta**2 + 2 * rho * delta)
    else:
        delta = (
            su**2 * (1 + rho**2) + 2 * b2s2 - (1 + rho) * su * math.sqrt(4 * b2s2 + su**2 * (1 - rho) ** 2)
        ) / (2 * rho * su**2 - 2 * b2s2)
        sigma_eps2 = lam**2 * b2s2 * (1 + rho**2) / (rho * delta**2 + rho**2 * delta + rho + delta)
    return NoiseStructure(lam, gamma, delta, sigma_eps2, v)


# -- brute-force oracle ------------------------------------------------------


def _exposure_weights(rho: float, variant: Exposure, tol: float = 1e-20) -> np.ndarray:
    """MA(infinity) weights of theta_t - E[theta_t] in units of z."""
    a = abs(rho)
    n = 2 if a == 0 else int(math.ceil(math.log(tol) / math.log(a))) + 3
    powers = rho ** np.arange(n, dtype=float)
    if variant is Exposure.AR1:
        return powers
    psi = np.empty(n + 1)
    psi[0] = 1.0
    psi[1:] = powers * (1 + rho)
    return psi


def return_autocovariances(params: MarketParams, variant=Exposure.AR1, *, lambda_: float | None = None):
    """Lag-0 and lag-1 autocovariances of the spot returns by direct summation.

    ``Delta S_t = lambda * beta * theta_t + lambda * u_t`` with ``theta_t``
    expanded in its MA(infinity) weights, truncated below 1e-20.
    """
    v = _as_variant(variant)
    _require_stationary(params)
    lam = impact_lambda(params, v) if lambda_ is None else lambda_
    psi = _exposure_weights(params.rho, v)
    scale = (lam * params.beta * params.sigma_z) ** 2
    v0 = scale * float(psi @ psi) + (lam * params.sigma_u) ** 2
    v1 = scale * float(psi[1:] @ psi[:-1])
    return v0, v1


def arma11_autocovariances(sigma_eps2: float, rho: float, delta: float):
    """``(V0, V1)`` of a stationary ARMA(1,1) with ``+delta`` MA sign."""
    d = 1 - rho**2
    v0 = sigma_eps2 * (1 + delta**2 + 2 * rho * delta) / d
    v1 = sigma_eps2 * (rho + rho * delta**2 + rho**2 * delta + delta) / d
    return v0, v1


def _lag1_ratio(delta, rho):
    return (1 + rho * delta) * (rho + delta) / (1 + delta**2 + 2 * rho * delta)


def oracle_delta(
    params: MarketParams,
    variant=Exposure.AR1,
    *,
    lambda_: float | None = None,
    resolution: float = 1e-4,
    tol: float = 1e-10,
):
    """Invertible ``(delta, sigma_eps2)`` by autocovariance matching.

    Scans ``delta`` over (-1, 1) at ``resolution`` for a sign change of
    ``V1(delta)/V0(delta) - V1/V0`` and bisects the bracket down to ``tol``.
    ``sigma_eps2`` then follows from the lag-0 equation.
    """
    v = _as_variant(variant)
    v0, v1 = return_autocovariances(params, v, lambda_=lambda_)
    if v0 <= 0:
        raise DegenerateParametersError("returns have zero variance")
    rho = params.rho
    target = v1 / v0

    n = int(round(2 / resolution))
    grid = np.linspace(-1.0, 1.0, n + 1)
    grid[0], grid[-1] = -1 + 1e-12, 1 - 1e-12
    h = _lag1_ratio(grid, rho) - target
    exact = np.flatnonzero(h == 0)
    if exact.size:
        delta = float(grid[exact[0]])
    else:
        flips = np.flatnonzero(np.sign(h[:-1]) != np.sign(h[1:]))
        if flips.size == 0:
            raise NoInvertibleRootError(f"no invertible MA root for {params}", params=params)
        lo, hi = float(grid[flips[0]]), float(grid[flips[0] + 1])
        h_lo = h[flips[0]]
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            h_mid = _lag1_ratio(mid, rho) - target
            if h_mid == 0:
                lo = hi = mid
                break
            if np.sign(h_mid) == np.sign(h_lo):
                lo, h_lo = mid, h_mid
            else:
                hi = mid
        delta = 0.5 * (lo + hi)
    sigma_eps2 = v0 * (1 - rho**2) / (1 + delta**2 + 2 * rho * delta)
    return delta, sigma_eps2


def delta_limit(params: MarketParams, variant=Exposure.AR1, *, eps: float = 1e-6) -> float:
    """Value of ``delta`` at ``rho = 0`` from the oracle evaluated at ``rho = +/-eps``."""
    lo, _ = oracle_delta(params.replace(rho=-eps), variant)
    hi, _ = oracle_delta(params.replace(rho=eps), variant)
    return 0.5 * (lo + hi)


def check_criterion_bounds(rho: float, delta: float) -> bool:
    """True iff ``-1 < rho < 0`` with ``0 < delta < -rho``, or ``0 < rho < 1`` with ``-1 < delta < -rho``."""
    if -1 < rho < 0:
        return 0 < delta < -rho
    if 0 < rho < 1:
        return -1 < delta < -rho
    return False
