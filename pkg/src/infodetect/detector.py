"""Sign/magnitude detection rules over rolling ARMA(1,1) estimates.

The decisive rule sums the rolling ``rho_hat`` and ``delta_hat`` over usable
windows and fires when the sums have opposite signs and

* branch A: ``sum_rho < 0`` and ``|sum_rho| > |sum_delta|``, or
* branch B: ``sum_rho > 0`` and ``|sum_rho| < |sum_delta|``.

A day is accepted when either the spot or the futures leg fires.  That
combination rule is inferred: it is the one rule consistent with every
published row of the replay tables.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import date
from importlib import resources
from pathlib import Path

from .estimator import RollingEstimates
from .model_core import check_criterion_bounds

GAMMA_TOL = 1e-12


class Branch(str, enum.Enum):
    A = "A"
    B = "B"
    NONE = "NONE"


@dataclass(frozen=True)
class CriterionEvidence:
    sum_rho: float
    sum_delta: float
    n_windows_used: int
    branch: Branch
    insufficient: bool = False

    @property
    def fires(self) -> bool:
        return self.branch is not Branch.NONE


@dataclass(frozen=True)
class Verdict:
    day: date | None
    pair: tuple[str, str]
    spot_evidence: CriterionEvidence
    futures_evidence: CriterionEvidence
    accepted: bool

    @property
    def label(self) -> str:
        if self.accepted:
            return "accepted"
        if self.spot_evidence.insufficient and self.futures_evidence.insufficient:
            return "insufficient"
        return "declined"


def classify(sum_rho: float, sum_delta: float, margin: float = 0.0) -> Branch:
    """Branch of the decisive rule for given sums.

    ``margin`` demands the magnitude ordering by at least that much; the
    default of zero is the plain rule and ``math.inf`` never fires.
    """
    if not sum_rho * sum_delta < 0:
        return Branch.NONE
    gap = abs(sum_rho) - abs(sum_delta)
    if sum_rho < 0 and gap > margin:
        return Branch.A
    if sum_rho > 0 and -gap > margin:
        return Branch.B
    return Branch.NONE


def evidence_from_sums(sum_rho: float, sum_delta: float, n_windows: int = 1, margin: float = 0.0) -> CriterionEvidence:
    return CriterionEvidence(sum_rho, sum_delta, n_windows, classify(sum_rho, sum_delta, margin))


def decisive_criterion(estimates: RollingEstimates, *, gamma_tol: float = GAMMA_TOL, margin: float = 0.0) -> CriterionEvidence:
    """Evidence from windows that converged, are not degenerate and have ``|gamma_hat| > gamma_tol * price_scale``."""
    sr = sd = 0.0
    used = 0
    for f in estimates.fits:
        if not f.converged or f.degenerate or not math.isfinite(f.rho_hat):
            continue
        if not abs(f.gamma_hat) > gamma_tol * abs(f.price_scale):
            continue
        sr += f.rho_hat
        sd += f.delta_hat
        used += 1
    if used == 0:
        return CriterionEvidence(0.0, 0.0, 0, Branch.NONE, insufficient=True)
    return CriterionEvidence(sr, sd, used, classify(sr, sd, margin))


def joint_verdict(spot: CriterionEvidence, fut: CriterionEvidence, day=None, pair=("spot", "futures")) -> Verdict:
    return Verdict(day, tuple(pair), spot, fut, spot.fires or fut.fires)


def generalized_criterion(rho: float, delta: float) -> bool:
    """Bound form of the criterion as used for the spot/futures system."""
    return check_criterion_bounds(rho, delta)


# -- published tables ---------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    table: str
    panel: str
    instrument: str
    date: date
    spot_rho: float | None
    spot_delta: float | None
    futures_rho: float | None
    futures_delta: float | None
    published: str | None

    @property
    def complete(self) -> bool:
        vals = (self.spot_rho, self.spot_delta, self.futures_rho, self.futures_delta)
        return all(v is not None for v in vals) and self.published is not None


@dataclass(frozen=True)
class ReplayResult:
    row: TableRow
    computed: str
    match: bool


@dataclass
class ReplayReport:
    results: list[ReplayResult] = field(default_factory=list)
    skipped: list[tuple[TableRow, str]] = field(default_factory=list)

    @property
    def n_matches(self) -> int:
        return sum(r.match for r in self.results)

    @property
    def mismatches(self) -> list[ReplayResult]:
        return [r for r in self.results if not r.match]


def _cell(text):
    text = text.strip()
    return float(text) if text else None


def load_published_tables(source=None) -> list[TableRow]:
    """Rows of the bundled table transcription (or of ``source``, same layout)."""
    if source is None:
        text = resources.files("infodetect").joinpath("data/published_tables.csv").read_text(encoding="utf-8")
    else:
        text = Path(source).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    rows = []
    for rec in csv.DictReader(lines):
        rows.append(
            TableRow(
                rec["table"], rec["panel"], rec["instrument"], date.fromisoformat(rec["date"]),
                _cell(rec["spot_rho"]), _cell(rec["spot_delta"]),
                _cell(rec["futures_rho"]), _cell(rec["futures_delta"]),
                rec["published"].strip() or None,
            )
        )
    return rows


def replay_table(rows) -> ReplayReport:
    """Apply the decisive rule to published pairs, treating each pair as the window sums."""
    report = ReplayReport()
    for row in rows:
        if not row.complete:
            report.skipped.append((row, "missing cell"))
            continue
        v = joint_verdict(
            evidence_from_sums(row.spot_rho, row.spot_delta),
            evidence_from_sums(row.futures_rho, row.futures_delta),
            day=row.date,
        )
        computed = "accepted" if v.accepted else "declined"
        report.results.append(ReplayResult(row, computed, computed == row.published))
    return report


# -- reports ------------------------------------------------------------------

REPORT_FIELDS = ["date", "spot_rho", "spot_delta", "futures_rho", "futures_delta", "verdict"]


def verdict_records(verdicts) -> list[dict]:
    out = []
    for v in verdicts:
        s, f = v.spot_evidence, v.futures_evidence
        out.append(
            {
                "date": v.day.isoformat() if v.day else "",
                "spot_rho": s.sum_rho,
                "spot_delta": s.sum_delta,
                "futures_rho": f.sum_rho,
                "futures_delta": f.sum_delta,
                "verdict": v.label,
                "spot_branch": s.branch.value,
                "futures_branch": f.branch.value,
                "spot_windows": s.n_windows_used,
                "futures_windows": f.n_windows_used,
            }
        )
    return out


def format_records(records: list[dict], fmt: str = "csv", fields=None) -> str:
    """Serialise report records as CSV (``fields`` first, extras after) or JSON."""
    if fmt == "json":
        return json.dumps(records, indent=2, default=str) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    keys = list(fields or [])
    for rec in records:
        keys += [k for k in rec if k not in keys]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    w.writerows(records)
    return buf.getvalue()


def replay_records(report: ReplayReport) -> list[dict]:
    recs = []
    for r in report.results:
        d = {k: v for k, v in asdict(r.row).items()}
        d["date"] = r.row.date.isoformat()
        d.update(computed=r.computed, match=r.match)
        recs.append(d)
    for row, note in report.skipped:
        d = {k: v for k, v in asdict(row).items()}
        d["date"] = row.date.isoformat()
        d.update(computed="skipped", match=None, note=note)
        recs.append(d)
    return recs


def detect_pair(spot, futures, window="1h", step="1m", *, day=None, margin: float = 0.0, min_obs: int | None = None) -> Verdict:
    """Rolling fits on both legs of one day, decisive rule per leg, joint verdict."""
    from .estimator import MIN_OBS, rolling_fit

    kw = {"min_obs": MIN_OBS if min_obs is None else min_obs}
    ev = []
    for series in (spot, futures):
        if len(series) == 0:
            ev.append(CriterionEvidence(0.0, 0.0, 0, Branch.NONE, insufficient=True))
            continue
        ev.append(decisive_criterion(rolling_fit(series, window, step, **kw), margin=margin))
    return joint_verdict(ev[0], ev[1], day=day if day is not None else spot.day, pair=(spot.instrument, futures.instrument))
