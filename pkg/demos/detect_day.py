#! /usr/bin/env python
"""Simulate one informed and one uninformed trading day and run the detector.

Eight hours of one-second ticks, 1-hour windows every 15 minutes.  Takes a
few seconds (the first call compiles the fitting kernel).
"""

import numpy as np

from infodetect import Exposure, MarketParams, SimConfig, TickSeries, detect_pair, noise_structure_ar1, simulate_path

params = MarketParams(rho=-0.6, theta_bar=0.01, r=1e-8, s0=10_000.0)
ns = noise_structure_ar1(params)
print(f"model: rho = {params.rho}, delta = {ns.delta:.4f}, lambda = {ns.lambda_:.3f}")

t0 = 1_390_986_000_000
for variant in (Exposure.AR1, Exposure.NULL):
    path = simulate_path(SimConfig(params, variant, n_steps=28_800, seed=1))
    ts = t0 + 1000 * np.arange(len(path), dtype=np.int64)
    v = detect_pair(TickSeries("spot", ts, path.spot), TickSeries("futures", ts, path.futures), "1h", "15m")
    s, f = v.spot_evidence, v.futures_evidence
    print(f"{variant.value:>4} day: spot sums ({s.sum_rho:+.3f}, {s.sum_delta:+.3f}) {s.branch.value}, "
          f"futures sums ({f.sum_rho:+.3f}, {f.sum_delta:+.3f}) {f.branch.value} -> {v.label}")

# Null days fire too: the sum of 29 noisy rho_hat has a random sign, and
# for white noise the fits sit near rho = -delta, so branch A or B is a coin
# flip on the magnitude ordering.  The power study measures both rates.
