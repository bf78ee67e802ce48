"""Command-line entry point: ``infodetect <subcommand>``.

Settings resolve as command-line flag, then ``--config`` JSON file, then
built-in default.  Exit codes are listed in ``EXIT_*`` below.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import detector, power_study
from .errors import DegenerateParametersError, EmptyInputError, TickParseError
from .estimator import MIN_OBS, rolling_fit
from .ingest import TickSchema, pair_days, parse_duration, parse_ticks, slice_days
from .model_core import Exposure, MarketParams, noise_structure
from .simulator import SimConfig, export_ticks, simulate_path
from .verification import run_verification

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_CONVERGENCE = 4
EXIT_VERIFY = 5

MS_PER_YEAR = 365 * 86_400_000

DEFAULTS = {
    "window": "1h",
    "step": "1m",
    "tz": "UTC",
    "seed": 0,
    "format": "csv",
    "schema": None,
    "out": None,
    "min_obs": MIN_OBS,
}


class ConfigError(ValueError):
    pass


def per_step_rate(r_annual: float, step_ms: int) -> float:
    """Continuously compounded annual rate to a per-step rate."""
    return r_annual * step_ms / MS_PER_YEAR


def _settings(args, extra_defaults=None) -> dict:
    merged = dict(DEFAULTS)
    merged.update(extra_defaults or {})
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                merged.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    merged.update({k: v for k, v in vars(args).items() if v is not None and k not in ("func", "config")})
    if merged["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {merged['format']!r}")
    for key in ("window", "step"):
        if key in merged and merged[key] is not None:
            parse_duration(merged[key])
    return merged


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _schema(cfg):
    return TickSchema.load(cfg["schema"]) if cfg.get("schema") else TickSchema(timezone=cfg["tz"])


def _params_from(cfg_params: dict, tick_ms: int) -> MarketParams:
    p = dict(cfg_params)
    if "r_annual" in p:
        p["r"] = per_step_rate(p.pop("r_annual"), tick_ms)
    return MarketParams(**p)


# -- subcommands ----------------------------------------------------------------


def cmd_simulate(args) -> int:
    cfg = _settings(args, {"n_steps": 28_800, "variant": "ar1", "tick": "1s", "start": "2014-01-29T09:00:00+00:00"})
    if "params" not in cfg:
        raise ConfigError("simulate needs a 'params' object in --config")
    tick_ms = parse_duration(cfg["tick"])
    params = _params_from(cfg["params"], tick_ms)
    window = cfg.get("informed_window")
    sim = SimConfig(params, Exposure(cfg["variant"]), int(cfg["n_steps"]), int(cfg["seed"]),
                    tuple(window) if window is not None else None)
    path = simulate_path(sim)
    out = Path(cfg["out"] or ".")
    out.mkdir(parents=True, exist_ok=True)
    start = datetime.fromisoformat(cfg["start"].replace("Z", "+00:00"))
    if start.tzinfo is None:
        start = start.replace(tzinfo=timezone.utc)
    start_ms = int(start.timestamp() * 1000)
    for leg in ("spot", "futures"):
        export_ticks(path, out / f"{leg}.csv", leg, start_ms=start_ms, tick_ms=tick_ms)
    truth = {"variant": sim.variant.value, "seed": sim.seed, "n_steps": sim.n_steps, "lambda": path.lambda_,
             "params": {k: getattr(params, k) for k in params.__dataclass_fields__},
             "informed_steps": int(path.labels.sum()), "warnings": path.warnings}
    if sim.variant is not Exposure.NULL:
        try:
            ns = noise_structure(params, sim.variant)
            truth["reduced_form"] = {"gamma": ns.gamma, "rho": params.rho, "delta": ns.delta, "sigma_eps2": ns.sigma_eps2}
        except DegenerateParametersError as exc:
            truth["reduced_form"] = str(exc)
    (out / "truth.json").write_text(json.dumps(truth, indent=2), encoding="utf-8")
    return EXIT_OK


def cmd_fit(args) -> int:
    cfg = _settings(args)
    series = parse_ticks(args.file, _schema(cfg))
    records = []
    for ds in slice_days(series, cfg["tz"]):
        est = rolling_fit(ds.series, cfg["window"], cfg["step"], min_obs=int(cfg["min_obs"]))
        for f in est.fits:
            records.append({
                "day": ds.day.isoformat(),
                "window_start": datetime.fromtimestamp(f.start_ms / 1000, tz=timezone.utc).isoformat(),
                "n_obs": f.n_obs, "gamma_hat": f.gamma_hat, "rho_hat": f.rho_hat, "delta_hat": f.delta_hat,
                "sigma_eps2_hat": f.sigma_eps2_hat, "converged": f.converged,
            })
    _emit(detector.format_records(records, cfg["format"]), cfg["out"])
    return EXIT_OK


def cmd_detect(args) -> int:
    cfg = _settings(args)
    schema = _schema(cfg)
    spot = parse_ticks(args.spot, schema, instrument=Path(args.spot).stem)
    fut = parse_ticks(args.futures, schema, instrument=Path(args.futures).stem)
    verdicts = []
    attempted = converged = 0
    for pd_ in pair_days(spot, fut, cfg["tz"], min_ticks=int(cfg["min_obs"]) + 1):
        ev = []
        for series in (pd_.spot, pd_.futures):
            est = rolling_fit(series, cfg["window"], cfg["step"], min_obs=int(cfg["min_obs"]))
            tried = [f for f in est.fits if f.n_obs >= int(cfg["min_obs"])]
            attempted += len(tried)
            converged += sum(f.converged for f in tried)
            ev.append(detector.decisive_criterion(est))
        verdicts.append(detector.joint_verdict(ev[0], ev[1], day=pd_.day, pair=(spot.instrument, fut.instrument)))
    text = detector.format_records(detector.verdict_records(verdicts), cfg["format"], detector.REPORT_FIELDS)
    _emit(text, cfg["out"])
    if attempted and not converged:
        print("no rolling window converged", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_replay_tables(args) -> int:
    cfg = _settings(args)
    rows = detector.load_published_tables(cfg.get("source"))
    if cfg.get("table"):
        want = cfg["table"].upper()
        rows = [r for r in rows if (r.table + r.panel).upper() == want or r.table == want]
    report = detector.replay_table(rows)
    _emit(detector.format_records(detector.replay_records(report), cfg["format"]), cfg["out"])
    print(f"{report.n_matches}/{len(report.results)} rows match, {len(report.skipped)} skipped", file=sys.stderr)
    return EXIT_OK if not report.mismatches else EXIT_VERIFY


def cmd_verify(args) -> int:
    cfg = _settings(args)
    report = run_verification(perturb=bool(cfg.get("perturb")), seed=int(cfg["seed"]))
    _emit(detector.format_records(report.records(), cfg["format"]), cfg["out"])
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_power(args) -> int:
    cfg = _settings(args, {"trials": 200, "step": "15m", "day_steps": power_study.DAY_STEPS, "grid": None})
    grid_cfg = cfg["grid"] or [{"rho": -0.6, "theta_bar": 0.01, "r": 1e-8, "s0": 10_000.0}]
    grid = []
    for entry in grid_cfg:
        entry = dict(entry)
        variant = Exposure(entry.pop("variant", "ar1"))
        grid.append(power_study.GridPoint(MarketParams(**entry), variant, cfg["window"], cfg["step"]))
    reports = power_study.run_power_study(grid, int(cfg["trials"]), int(cfg["seed"]), day_steps=int(cfg["day_steps"]))
    _emit(detector.format_records(power_study.power_records(reports), cfg["format"]), cfg["out"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="infodetect", description="Informed-trading detection on spot/futures ticks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, window=True):
        p.add_argument("--config", help="JSON file with settings")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--out", help="output file (directory for simulate); stdout if omitted")
        p.add_argument("--seed", type=int)
        if window:
            p.add_argument("--window", help="rolling window length, e.g. 1h")
            p.add_argument("--step", help="window advance, e.g. 1m")
            p.add_argument("--tz", help="exchange timezone for day slicing")
            p.add_argument("--schema", help="JSON tick schema file")
            p.add_argument("--min-obs", dest="min_obs", type=int)
        return p

    p = common(sub.add_parser("simulate", help="simulate spot/futures tick files"), window=False)
    p.add_argument("--n-steps", dest="n_steps", type=int)
    p.add_argument("--variant", choices=[e.value for e in Exposure])
    p.set_defaults(func=cmd_simulate)

    p = common(sub.add_parser("fit", help="rolling ARMA(1,1) fits of one tick file"))
    p.add_argument("file")
    p.set_defaults(func=cmd_fit)

    p = common(sub.add_parser("detect", help="per-day verdicts for a spot/futures pair"))
    p.add_argument("spot")
    p.add_argument("futures")
    p.set_defaults(func=cmd_detect)

    p = common(sub.add_parser("replay-tables", help="replay the decision rule on the published tables"), window=False)
    p.add_argument("--table", help="restrict to 1A, 1B, 1C, 2 or 3")
    p.add_argument("--source", help="alternative table CSV")
    p.set_defaults(func=cmd_replay_tables)

    p = common(sub.add_parser("verify", help="oracle and identity checks"), window=False)
    p.add_argument("--perturb", action="store_true", default=None, help="use the literal published formulas (negative control)")
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("power", help="Monte Carlo firing rates"))
    p.add_argument("--trials", type=int)
    p.add_argument("--day-steps", dest="day_steps", type=int)
    p.set_defaults(func=cmd_power)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TickParseError, EmptyInputError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, DegenerateParametersError, ValueError, TypeError, KeyError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
