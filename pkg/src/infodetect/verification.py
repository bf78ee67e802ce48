"""Self-checking suites: closed forms versus oracle, futures identities, spectra."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateParametersError
from .model_core import (
    Exposure,
    MarketParams,
    noise_structure,
    noise_structure_as_printed,
    oracle_delta,
)
from .simulator import simulate_arma11_spot
from .varma import futures_from_spot, futures_return_recursion, stationarity_check

GRID_RHO = tuple(s * k / 10 for k in range(1, 10) for s in (1, -1))
GRID_SCALE = (0.5, 1.0, 2.0)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def records(self):
        return [{"check": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks]


def oracle_grid(rhos=GRID_RHO, scales=GRID_SCALE):
    """``MarketParams`` over rho x beta x sigma_z x sigma_u."""
    for rho, beta, sz, su in itertools.product(rhos, scales, scales, scales):
        yield MarketParams(rho=rho, beta=beta, sigma_z=sz, sigma_u=su)


def oracle_mismatches(grid, variant, *, formula=noise_structure, lambda_fn=None):
    """``[(params, |d delta|, |d sigma_eps2|)]`` over non-singular grid points."""
    out = []
    for p in grid:
        lam = lambda_fn(p) if lambda_fn else None
        try:
            ns = formula(p, variant) if lam is None else formula(p, variant, lambda_=lam)
        except (DegenerateParametersError, ZeroDivisionError):
            continue
        d, s2 = oracle_delta(p, variant, lambda_=lam)
        out.append((p, abs(ns.delta - d), abs(ns.sigma_eps2 - s2)))
    return out


def futures_identity_errors(params: MarketParams, *, gamma, delta, sigma_eps, n_steps, seed):
    """``(recursion error / price scale, worst carry-ratio relative error)`` on one simulated path."""
    spot, eps = simulate_arma11_spot(gamma, params.rho, delta, sigma_eps, n_steps, s0=params.s0, seed=seed)
    fut = futures_from_spot(spot, params)
    pred = futures_return_recursion(spot, eps, params, gamma=gamma, delta=delta)
    rec = float(np.max(np.abs(pred - np.diff(fut)[1:])) / np.max(np.abs(fut)))
    ratio = fut[:-1] * math.exp(-params.r) * spot[1:] / spot[:-1]
    lem = float(np.max(np.abs(fut[1:] - ratio) / np.abs(fut[1:])))
    return rec, lem


def run_verification(*, perturb: bool = False, n_paths: int = 10, n_steps: int = 10_000, seed: int = 0) -> VerificationReport:
    """Oracle equivalence, futures recursion, carry ratio, zero-rate collapse and spectra.

    ``perturb=True`` swaps in the literal published coefficient formulas, a
    negative control that must make the oracle check fail.
    """
    report = VerificationReport()
    formula = noise_structure_as_printed if perturb else noise_structure
    for variant in (Exposure.AR1, Exposure.ARMA12):
        mm = oracle_mismatches(oracle_grid(), variant, formula=formula)
        worst = max(max(a, b) for _, a, b in mm)
        report.checks.append(Check(f"oracle[{variant.value}]", worst < 1e-6, f"{len(mm)} points, max |diff| = {worst:.3g}"))

    rng = np.random.default_rng(seed)
    rec_worst = lem_worst = 0.0
    for i in range(n_paths):
        rho = float(rng.uniform(-0.95, 0.95))
        r = float(rng.choice([0.0, 1e-6, 1e-5, 1e-4]))
        p = MarketParams(rho=rho, r=r, horizon_T=n_steps, s0=100.0)
        rec, lem = futures_identity_errors(p, gamma=1e-4, delta=-0.3, sigma_eps=0.01, n_steps=n_steps, seed=seed + i)
        rec_worst, lem_worst = max(rec_worst, rec), max(lem_worst, lem)
    report.checks.append(Check("futures recursion", rec_worst < 1e-9, f"max relative error {rec_worst:.3g}"))
    report.checks.append(Check("carry ratio", lem_worst < 1e-12, f"max relative error {lem_worst:.3g}"))

    p0 = MarketParams(rho=0.4, r=0.0, horizon_T=1000, s0=100.0)
    spot, _ = simulate_arma11_spot(1e-3, 0.4, -0.2, 0.01, 1000, s0=100.0, seed=seed)
    same = np.array_equal(np.diff(futures_from_spot(spot, p0)), np.diff(spot))
    report.checks.append(Check("zero rate: dF == dS", bool(same)))

    worst_eig = 0.0
    flips_ok = True
    for rho, r in itertools.product((-1.2, -1.0, -0.9, -0.5, 0.0, 0.5, 0.9, 0.999, 1.0, 1.5), (0.0, 1e-4, 0.01)):
        res = stationarity_check(MarketParams(rho=rho, r=r))
        worst_eig = max(
            worst_eig,
            float(np.max(np.abs(res.b_eigenvalues - np.sort_complex(np.array(res.analytic_b, dtype=complex))))),
            float(np.max(np.abs(res.c_eigenvalues)))
        )
        flips_ok &= res.is_stationary == (abs(rho) < 1)
    report.checks.append(Check("stationarity spectra", worst_eig < 1e-12 and flips_ok, f"max eigen error {worst_eig:.3g}"))
    return report
