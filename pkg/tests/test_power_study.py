import math

import pytest

from infodetect.model_core import Exposure, MarketParams
from infodetect.power_study import GridPoint, power_records, run_power_study

REF = MarketParams(rho=-0.6, theta_bar=0.01, r=1e-8, s0=10_000.0)
SHORT = dict(day_steps=7200)  # two-hour days, 30-minute windows


def point(params, **kw):
    return GridPoint(params, kw.pop("variant", Exposure.AR1), "30m", "30m")


def test_impossible_thresholds_never_fire():
    [rep] = run_power_study([point(REF)], 3, 0, margin=math.inf, **SHORT)
    assert rep.fire_rate_informed == 0.0 and rep.fire_rate_null == 0.0


def test_reproducible_and_order_independent():
    a = run_power_study([point(REF)], 4, 7, **SHORT)
    b = run_power_study([point(REF)], 4, 7, **SHORT)
    assert a == b
    # derived seeds depend on (seed, grid index): same index, same draws
    d = run_power_study([point(REF), point(REF.replace(rho=-0.3))], 4, 7, **SHORT)
    assert d[0] == a[0]


def test_singular_point_skipped():
    bad = MarketParams(rho=0.5, beta=-1.0)  # lambda denominator vanishes
    with pytest.warns(UserWarning, match="skipped"):
        reps = run_power_study([bad, point(REF)], 2, 0, **SHORT)
    assert len(reps) == 1


def test_bad_trial_count():
    with pytest.raises(ValueError):
        run_power_study([REF], 0, 0)


def test_informed_beats_null_on_short_days():
    [rep] = run_power_study([point(REF)], 20, 3, **SHORT)
    assert rep.fire_rate_informed > rep.fire_rate_null


@pytest.mark.xfail(strict=True, reason="for rho > 0 the informed reduced form satisfies neither branch of the rule")
def test_positive_rho_informed_beats_null():
    [rep] = run_power_study([point(REF.replace(rho=0.6))], 20, 3, **SHORT)
    assert rep.fire_rate_informed > rep.fire_rate_null


def test_records():
    [rec] = power_records(run_power_study([point(REF)], 2, 0, **SHORT))
    assert rec["rho"] == -0.6 and rec["n_trials"] == 2 and rec["variant"] == "ar1"
