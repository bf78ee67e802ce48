"""Detection of informed trading from rolling ARMA(1,1) fits of spot and futures ticks."""

from .detector import (
    Branch,
    CriterionEvidence,
    Verdict,
    decisive_criterion,
    detect_pair,
    generalized_criterion,
    joint_verdict,
    load_published_tables,
    replay_table,
)
from .estimator import ArmaFit, RollingEstimates, fit_arma11, rolling_fit
from .ingest import PairedDay, TickSchema, TickSeries, pair_days, parse_ticks, slice_days
from .model_core import (
    Exposure,
    MarketParams,
    NoiseStructure,
    check_criterion_bounds,
    impact_lambda,
    noise_structure,
    noise_structure_ar1,
    noise_structure_arma12,
    oracle_delta,
)
from .power_study import GridPoint, PowerReport, run_power_study
from .simulator import SimConfig, SimPath, export_ticks, simulate_path, simulate_theta
from .varma import futures_coefficients, futures_return_recursion, stationarity_check

__version__ = "0.1.0"
