#! /usr/bin/env python
"""Apply the decisive rule to the published coefficient tables."""

from infodetect import load_published_tables, replay_table

report = replay_table(load_published_tables())
for r in report.results:
    row = r.row
    flag = "" if r.match else "  <-- mismatch"
    print(f"T{row.table}{row.panel:<1} {row.instrument:<4} {row.date}  spot ({row.spot_rho:+.3f}, {row.spot_delta:+.3f})"
          f"  fut ({row.futures_rho:+.3f}, {row.futures_delta:+.3f})  {r.computed:>8}{flag}")
for row, note in report.skipped:
    print(f"T{row.table}{row.panel:<1} {row.instrument:<4} {row.date}  skipped: {note}")
print(f"{report.n_matches}/{len(report.results)} match")
