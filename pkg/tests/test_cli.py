import csv
import io
import json

import pytest

from infodetect.cli import EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_OK, EXIT_PARSE, EXIT_VERIFY, main, per_step_rate


def sim_config(tmp_path, name="cfg.json", **over):
    cfg = {"params": {"rho": -0.6, "theta_bar": 0.01, "r": 1e-8, "s0": 10000.0}, "n_steps": 3600, "seed": 5}
    cfg.update(over)
    f = tmp_path / name
    f.write_text(json.dumps(cfg))
    return f


def simulate(tmp_path, out="sim", **over):
    cfg = sim_config(tmp_path, **over)
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / out)]) == EXIT_OK
    return tmp_path / out


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_simulate_writes_both_legs(tmp_path):
    out = simulate(tmp_path)
    assert sorted(p.name for p in out.iterdir()) == ["futures.csv", "spot.csv", "truth.json"]
    truth = json.loads((out / "truth.json").read_text())
    assert truth["informed_steps"] == 3601
    assert truth["reduced_form"]["delta"] > 0


def test_simulate_seed_repetition(tmp_path):
    a, b = simulate(tmp_path, "a"), simulate(tmp_path, "b")
    assert (a / "spot.csv").read_bytes() == (b / "spot.csv").read_bytes()
    assert (a / "futures.csv").read_bytes() == (b / "futures.csv").read_bytes()


def test_simulate_null_labels(tmp_path):
    out = simulate(tmp_path, variant="null")
    rows = read_csv((out / "spot.csv").read_text())
    assert not any(int(r["informed"]) for r in rows)


def test_simulate_annual_rate(tmp_path):
    out = simulate(tmp_path, params={"rho": 0.3, "r_annual": 0.05, "s0": 100.0})
    truth = json.loads((out / "truth.json").read_text())
    assert truth["params"]["r"] == pytest.approx(per_step_rate(0.05, 1000))


def test_simulate_needs_params(tmp_path):
    f = tmp_path / "c.json"
    f.write_text("{}")
    assert main(["simulate", "--config", str(f)]) == EXIT_CONFIG


def test_bad_config_file(tmp_path):
    f = tmp_path / "c.json"
    f.write_text("{not json")
    assert main(["verify", "--config", str(f)]) == EXIT_CONFIG


def test_fit(tmp_path, capsys):
    out = simulate(tmp_path)
    assert main(["fit", str(out / "spot.csv"), "--window", "30m", "--step", "15m"]) == EXIT_OK
    rows = read_csv(capsys.readouterr().out)
    assert len(rows) == 3 and all(r["converged"] == "True" for r in rows)


def test_detect_informed_day(tmp_path, capsys):
    out = simulate(tmp_path, n_steps=7200)
    code = main(["detect", str(out / "spot.csv"), str(out / "futures.csv"), "--window", "30m", "--step", "15m"])
    assert code == EXIT_OK
    [row] = read_csv(capsys.readouterr().out)
    assert list(row)[:6] == ["date", "spot_rho", "spot_delta", "futures_rho", "futures_delta", "verdict"]
    assert row["verdict"] == "accepted"


def test_detect_null_day_matches_library(tmp_path, capsys):
    # null days fire often under the plain rule, so check agreement with the pipeline instead of a fixed label
    from infodetect.detector import detect_pair
    from infodetect.ingest import parse_ticks

    out = simulate(tmp_path, n_steps=7200, variant="null")
    main(["detect", str(out / "spot.csv"), str(out / "futures.csv"), "--window", "30m", "--step", "15m",
          "--format", "json"])
    [row] = json.loads(capsys.readouterr().out)
    v = detect_pair(parse_ticks(out / "spot.csv"), parse_ticks(out / "futures.csv"), "30m", "15m")
    assert row["verdict"] == v.label
    assert row["spot_rho"] == pytest.approx(v.spot_evidence.sum_rho)


def test_detect_sparse_day_insufficient(tmp_path, capsys):
    lines = "timestamp,price\n" + "".join(f"{1_390_986_000_000 + 1000 * i},{100 + i % 3}\n" for i in range(60))
    (tmp_path / "s.csv").write_text(lines)
    (tmp_path / "f.csv").write_text(lines)
    code = main(["detect", str(tmp_path / "s.csv"), str(tmp_path / "f.csv"), "--window", "1h"])
    assert code == EXIT_OK
    [row] = read_csv(capsys.readouterr().out)
    assert row["verdict"] == "insufficient"


def test_detect_parse_error(tmp_path, capsys):
    (tmp_path / "s.csv").write_text("timestamp,price\n1,abc\n")
    assert main(["detect", str(tmp_path / "s.csv"), str(tmp_path / "s.csv")]) == EXIT_PARSE
    assert "s.csv:2" in capsys.readouterr().err


def test_detect_no_convergence(tmp_path, monkeypatch):
    import infodetect.cli as cli
    from infodetect.estimator import ArmaFit

    real = cli.rolling_fit

    def broken(*a, **k):
        est = real(*a, **k)
        est.fits = [ArmaFit(f.gamma_hat, f.rho_hat, f.delta_hat, 1.0, f.n_obs, False, 1.0) for f in est.fits]
        return est

    out = simulate(tmp_path, n_steps=3600)
    monkeypatch.setattr(cli, "rolling_fit", broken)
    code = main(["detect", str(out / "spot.csv"), str(out / "futures.csv"), "--window", "30m", "--step", "30m"])
    assert code == EXIT_CONVERGENCE


def test_flag_beats_config(tmp_path, capsys):
    out = simulate(tmp_path)
    cfg = tmp_path / "fit.json"
    cfg.write_text(json.dumps({"window": "30m", "step": "30m", "format": "json"}))
    main(["fit", str(out / "spot.csv"), "--config", str(cfg), "--step", "15m"])
    assert len(json.loads(capsys.readouterr().out)) == 3


def test_bad_duration(tmp_path):
    out = simulate(tmp_path)
    assert main(["fit", str(out / "spot.csv"), "--window", "forever"]) == EXIT_CONFIG


def test_replay_full(capsys):
    assert main(["replay-tables"]) == EXIT_OK
    cap = capsys.readouterr()
    assert "34/34 rows match, 1 skipped" in cap.err
    rows = read_csv(cap.out)
    skipped = [r for r in rows if r["computed"] == "skipped"]
    assert len(skipped) == 1 and skipped[0]["date"] == "2013-12-17" and skipped[0]["note"] == "missing cell"


def test_replay_panel_a(capsys):
    assert main(["replay-tables", "--table", "1A", "--format", "json"]) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 7 and {r["computed"] for r in rows} == {"declined"}


def test_replay_mismatch_exit(tmp_path):
    f = tmp_path / "t.csv"
    f.write_text("table,panel,instrument,date,spot_rho,spot_delta,futures_rho,futures_delta,published\n"
                 "9,,X,2020-01-02,-0.5,0.1,0.1,0.2,declined\n")
    assert main(["replay-tables", "--source", str(f)]) == EXIT_VERIFY


def test_verify(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "--format", "json", "--out", str(out)]) == EXIT_OK
    checks = {c["check"]: c["passed"] for c in json.loads(out.read_text())}
    assert checks["zero rate: dF == dS"] and all(checks.values())


def test_verify_perturbed():
    assert main(["verify", "--perturb"]) == EXIT_VERIFY


def test_power(tmp_path, capsys):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"grid": [{"rho": -0.6, "theta_bar": 0.01, "s0": 10000.0}], "window": "30m"}))
    assert main(["power", "--config", str(cfg), "--trials", "2", "--day-steps", "3600", "--step", "30m"]) == EXIT_OK
    [row] = read_csv(capsys.readouterr().out)
    assert row["n_trials"] == "2" and row["window"] == "30m"


def test_per_step_rate():
    assert per_step_rate(0.0365, 86_400_000) == pytest.approx(1e-4)
