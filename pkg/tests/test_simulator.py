import warnings

import numpy as np
import pytest

from infodetect.errors import PathDegenerateWarning
from infodetect.estimator import fit_arma11
from infodetect.ingest import parse_ticks
from infodetect.model_core import Exposure, MarketParams, noise_structure_ar1
from infodetect.simulator import SimConfig, export_ticks, simulate_arma11_spot, simulate_path, simulate_theta


def test_theta_identically_zero_without_noise():
    # sigma_z = 0 and theta_bar = 0: the stationary start is the mean, 0
    cfg = SimConfig(MarketParams(rho=0.7, sigma_z=0.0, sigma_u=1.0), n_steps=500, seed=1)
    assert np.all(simulate_theta(cfg) == 0.0)


def test_theta_without_persistence_is_mean_plus_noise():
    cfg = SimConfig(MarketParams(rho=0.0, theta_bar=2.5), n_steps=200_000, seed=2)
    theta = simulate_theta(cfg)
    assert theta.mean() == pytest.approx(2.5, abs=0.01)
    assert abs(np.corrcoef(theta[1:], theta[:-1])[0, 1]) < 0.01


def test_theta_lag1_autocorrelation():
    cfg = SimConfig(MarketParams(rho=0.9), n_steps=100_000, seed=3)
    theta = simulate_theta(cfg)
    assert np.corrcoef(theta[1:], theta[:-1])[0, 1] == pytest.approx(0.9, abs=0.01)


def test_theta_matches_path_theta():
    cfg = SimConfig(MarketParams(rho=0.3, theta_bar=0.1), Exposure.ARMA12, n_steps=1000, seed=9)
    np.testing.assert_array_equal(simulate_theta(cfg), simulate_path(cfg).theta)


def test_arma12_theta_recursion():
    cfg = SimConfig(MarketParams(rho=0.3), Exposure.ARMA12, n_steps=200_000, seed=4)
    theta = simulate_theta(cfg)
    # stationary variance sz^2 * (1 + 2 rho + 1) / (1 - rho^2) for theta = rho theta + z + z_{t-1}
    assert theta.var() == pytest.approx((2 + 2 * 0.3) / (1 - 0.09), rel=0.02)


def test_no_informed_noise_gives_flat_spot():
    # sigma_z = 0 means lambda = 0, so no flow moves the price
    p = MarketParams(rho=0.5, sigma_z=0.0, sigma_u=1.0, r=1e-4, horizon_T=100, s0=50.0)
    path = simulate_path(SimConfig(p, n_steps=99, seed=0))
    assert path.lambda_ == 0.0
    assert np.all(path.spot == 50.0)
    np.testing.assert_allclose(path.futures, 50.0 * np.exp(1e-4 * (100 - np.arange(100))), rtol=1e-15)


def test_zero_rate_futures_equal_spot():
    path = simulate_path(SimConfig(MarketParams(rho=0.4, r=0.0), n_steps=1000, seed=5))
    np.testing.assert_array_equal(path.futures, path.spot)


def test_cost_of_carry_relation():
    p = MarketParams(rho=0.4, r=2e-5, horizon_T=2000)
    path = simulate_path(SimConfig(p, n_steps=1500, seed=6))
    t = np.arange(1501)
    np.testing.assert_allclose(path.futures, path.spot * np.exp(2e-5 * (2000 - t)), rtol=1e-15)


def test_carry_ratio():
    p = MarketParams(rho=0.4, r=3e-5, horizon_T=2000, s0=1000.0)
    path = simulate_path(SimConfig(p, n_steps=1500, seed=7))
    s, f = path.spot, path.futures
    np.testing.assert_allclose(f[1:], f[:-1] * np.exp(-3e-5) * s[1:] / s[:-1], rtol=1e-12)


def test_reproducible():
    cfg = SimConfig(MarketParams(rho=-0.3, theta_bar=0.05), n_steps=2000, seed=42, informed_window=(100, 900))
    a, b = simulate_path(cfg), simulate_path(cfg)
    for name in ("spot", "futures", "theta", "x_flow", "labels"):
        np.testing.assert_array_equal(getattr(a, name), getattr(b, name))
    c = simulate_path(SimConfig(cfg.params, n_steps=2000, seed=43, informed_window=(100, 900)))
    assert not np.array_equal(a.spot, c.spot)


def test_informed_window_labels():
    path = simulate_path(SimConfig(MarketParams(rho=0.5), n_steps=100, seed=0, informed_window=(10, 19)))
    assert path.labels.sum() == 10 and path.labels[10] and path.labels[19] and not path.labels[20]
    # outside the window the flow is pure noise: x = u there
    u_only = path.x_flow[~path.labels]
    assert u_only.size == 91


def test_empty_informed_window_and_null_labels():
    path = simulate_path(SimConfig(MarketParams(rho=0.5), Exposure.NULL, n_steps=100, seed=0))
    assert not path.labels.any()
    assert np.all(path.theta == 0)


def test_bad_informed_window():
    with pytest.raises(ValueError):
        SimConfig(MarketParams(rho=0.5), n_steps=10, informed_window=(5, 11))


def test_negative_price_flagged():
    p = MarketParams(rho=0.5, s0=1.0, sigma_u=5.0)
    with pytest.warns(PathDegenerateWarning):
        path = simulate_path(SimConfig(p, n_steps=1000, seed=0))
    assert path.warnings


def test_round_trip_reduced_form():
    p = MarketParams(rho=0.5, s0=10_000.0)
    ns = noise_structure_ar1(p)
    path = simulate_path(SimConfig(p, n_steps=100_000, seed=11))
    fit = fit_arma11(np.diff(path.spot))
    assert abs(fit.rho_hat - 0.5) < 0.05
    assert abs(fit.delta_hat - ns.delta) < 0.05


def test_null_regime_rho_centred_on_zero():
    rhos = []
    for seed in range(10):
        path = simulate_path(SimConfig(MarketParams(rho=0.5), Exposure.NULL, n_steps=5000, seed=seed))
        d = np.diff(path.spot)
        rhos.append(np.corrcoef(d[1:], d[:-1])[0, 1])
    assert abs(np.median(rhos)) < 0.03


def test_arma11_spot_generator():
    spot, eps = simulate_arma11_spot(0.0, 0.5, -0.7, 1.0, 5000, seed=1)
    assert spot[0] == 100.0 and len(spot) == len(eps) == 5001
    d = np.diff(spot)
    np.testing.assert_allclose(d[1:], 0.5 * d[:-1] - 0.7 * eps[1:-1] + eps[2:], atol=1e-12)


def test_export_round_trip_bit_exact(tmp_path):
    p = MarketParams(rho=0.5, r=1e-6, s0=123.456)
    path = simulate_path(SimConfig(p, n_steps=500, seed=8, informed_window=(100, 200)))
    for leg in ("spot", "futures"):
        export_ticks(path, tmp_path / f"{leg}.csv", leg)
        series = parse_ticks(tmp_path / f"{leg}.csv")
        np.testing.assert_array_equal(series.prices, getattr(path, leg))
        assert np.all(np.diff(series.timestamps) == 1000)
    rows = (tmp_path / "spot.csv").read_text().splitlines()
    labels = [int(r.split(",")[2]) for r in rows[1:]]
    assert labels == path.labels.astype(int).tolist()


def test_minimal_export(tmp_path):
    path = simulate_path(SimConfig(MarketParams(rho=0.5), n_steps=2, seed=0))
    export_ticks(path, tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "timestamp,price,informed" and len(lines) == 4


def test_no_warning_on_ordinary_path():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        simulate_path(SimConfig(MarketParams(rho=0.5, s0=1000.0), n_steps=1000, seed=0))
