"""CSV and plain-text renderings of run reports."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable

from gridtrust.purge import QuarantineRegistry
from gridtrust.simulator import ReportRow, RunReport, Scenario, aggregate

REPORT_COLUMNS = ("run", "initiator", "provider", "ts1", "existing_decision", "ts2", "proposed_decision")
AGGREGATE_COLUMNS = ("run", "flagged", "precision", "recall", "flip_rows")


def yes_no(flag: bool) -> str:
    return "YES" if flag else "NO"


def _parse_yes_no(text: str) -> bool:
    text = text.strip().upper()
    if text not in ("YES", "NO"):
        raise ValueError(f"decision must be YES or NO, got {text!r}")
    return text == "YES"


def render_csv(reports: Iterable[RunReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for rep in reports:
        for r in rep.rows:
            writer.writerow([r.run, r.initiator, r.provider, repr(r.ts1), yes_no(r.existing), repr(r.ts2), yes_no(r.proposed)])
    return buf.getvalue()


def render_table(reports: Iterable[RunReport]) -> str:
    lines = []
    header = f"{'Initiator':<10} {'Provider':<9} {'TS1':>6}  {'Existing Model':<15} {'TS2':>6}  {'Proposed Model':<14}"
    for rep in reports:
        lines.append(f"Run {rep.run}  flagged: {', '.join(sorted(rep.flagged)) or '-'}")
        lines.append(header)
        for r in rep.rows:
            lines.append(
                f"{r.initiator:<10} {r.provider:<9} {r.ts1:>6.3f}  {yes_no(r.existing):<15} {r.ts2:>6.3f}  {yes_no(r.proposed):<14}"
            )
        lines.append("")
    return "\n".join(lines)


def render_summary(reports: list[RunReport]) -> str:
    """Per-pair means across runs with YES counts, then flag statistics."""
    runs = len(reports)
    order: list[tuple[str, str]] = []
    acc: dict[tuple[str, str], list[ReportRow]] = {}
    for rep in reports:
        for r in rep.rows:
            key = (r.initiator, r.provider)
            if key not in acc:
                order.append(key)
                acc[key] = []
            acc[key].append(r)
    lines = [
        f"{'Initiator':<10} {'Provider':<9} {'TS1':>6}  {'Existing Model':<15} {'TS2':>6}  {'Proposed Model':<14}"
    ]
    for key in order:
        rows = acc[key]
        ts1 = sum(r.ts1 for r in rows) / len(rows)
        ts2 = sum(r.ts2 for r in rows) / len(rows)
        ex = sum(r.existing for r in rows)
        pr = sum(r.proposed for r in rows)
        ex_s = f"{yes_no(2 * ex > len(rows))} ({ex}/{len(rows)})"
        pr_s = f"{yes_no(2 * pr > len(rows))} ({pr}/{len(rows)})"
        lines.append(f"{key[0]:<10} {key[1]:<9} {ts1:>6.3f}  {ex_s:<15} {ts2:>6.3f}  {pr_s:<14}")
    agg = aggregate(reports)
    lines.append("")
    flagged = ", ".join(f"{e}:{c}" for e, c in agg.flag_counts.items()) or "-"
    lines.append(f"runs={runs} flagged(count of runs)={flagged}")
    lines.append(
        f"exact_runs={agg.exact_runs}/{runs} precision={agg.mean_precision:.3f} "
        f"recall={agg.mean_recall:.3f} flip_rows={agg.flip_rows}"
    )
    return "\n".join(lines) + "\n"


def render_aggregate(reports: list[RunReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(AGGREGATE_COLUMNS)
    for rep in reports:
        writer.writerow([rep.run, " ".join(sorted(rep.flagged)), repr(rep.precision), repr(rep.recall), len(rep.flips)])
    agg = aggregate(reports)
    writer.writerow(["all", " ".join(agg.flag_counts), repr(agg.mean_precision), repr(agg.mean_recall), agg.flip_rows])
    return buf.getvalue()


def write_report(reports: list[RunReport], path: str | Path, format: str = "csv") -> None:
    """Write the comparison rows as ``csv`` or as a human-readable ``text`` table."""
    if not reports:
        raise ValueError("no reports to write")
    if format == "csv":
        text = render_csv(reports)
    elif format == "text":
        text = render_table(reports)
    else:
        raise ValueError(f"unknown report format {format!r}")
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report to {path}: {exc.strerror}") from exc


def read_report(path: str | Path) -> list[ReportRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != REPORT_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        return [
            ReportRow(
                run=int(row["run"]),
                initiator=row["initiator"],
                provider=row["provider"],
                ts1=float(row["ts1"]),
                existing=_parse_yes_no(row["existing_decision"]),
                ts2=float(row["ts2"]),
                proposed=_parse_yes_no(row["proposed_decision"]),
            )
            for row in reader
        ]


def write_outputs(reports: list[RunReport], scenarios: list[Scenario], out_dir: str | Path) -> list[Path]:
    """Write every output file for an experiment into ``out_dir``; returns the paths written."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot create output directory {out}: {exc.strerror}") from exc
    written = []
    write_report(reports, out / "report.csv", "csv")
    write_report(reports, out / "report.txt", "text")
    written += [out / "report.csv", out / "report.txt"]
    (out / "aggregate.csv").write_text(render_aggregate(reports))
    written.append(out / "aggregate.csv")
    width = max(2, len(str(len(reports))))
    for rep, scen in zip(reports, scenarios):
        qpath = out / f"quarantine_run{rep.run:0{width}d}.csv"
        QuarantineRegistry(rep.quarantine).to_csv(qpath)
        lpath = out / f"ledger_run{rep.run:0{width}d}.csv"
        scen.ledger.to_csv(lpath)
        written += [qpath, lpath]
    return written
