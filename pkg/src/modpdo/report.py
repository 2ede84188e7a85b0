"""Structured verification reports and their emitters."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .errors import InvalidInputError

__all__ = ["Metric", "VerificationReport", "emit_report", "report_to_dict", "report_from_dict"]

ARTIFACT_VERSION = "0.1.0"


@dataclass
class Metric:
    name: str
    value: float
    threshold: float
    passed: bool
    comparison: str = "<="  # how value relates to threshold when passing
    note: str = ""

    @staticmethod
    def bounded(name: str, value: float, threshold: float, note: str = "") -> "Metric":
        return Metric(name, float(value), float(threshold), bool(value <= threshold), "<=", note)

    @staticmethod
    def exceeds(name: str, value: float, threshold: float, note: str = "") -> "Metric":
        return Metric(name, float(value), float(threshold), bool(value > threshold), ">", note)


@dataclass
class VerificationReport:
    scenario: str
    config: dict
    metrics: list = field(default_factory=list)
    timings_ms: dict = field(default_factory=dict)
    artifact_version: str = ARTIFACT_VERSION
    error_class: str = ""  # "convergence" when a regularized limit failed
    # (x, value, series) rows for optional plot-data emission; not serialized
    plot_rows: list = field(default_factory=list, compare=False)

    @property
    def overall_pass(self) -> bool:
        return bool(self.metrics) and all(m.passed for m in self.metrics)

    def add(self, metric: Metric):
        self.metrics.append(metric)


def report_to_dict(report: VerificationReport) -> dict:
    if not report.metrics:
        raise InvalidInputError("reports must carry at least one metric")
    return {
        "artifact_version": report.artifact_version,
        "scenario": report.scenario,
        "config": report.config,
        "metrics": [
            {
                "name": m.name,
                "value": m.value,
                "threshold": m.threshold,
                "comparison": m.comparison,
                "pass": m.passed,
                "note": m.note,
            }
            for m in report.metrics
        ],
        "overall_pass": report.overall_pass,
        "error_class": report.error_class,
        "timings_ms": report.timings_ms,
    }


def report_from_dict(d: dict) -> VerificationReport:
    rep = VerificationReport(
        scenario=d["scenario"],
        config=dict(d["config"]),
        timings_ms=dict(d.get("timings_ms", {})),
        artifact_version=d.get("artifact_version", ARTIFACT_VERSION),
        error_class=d.get("error_class", ""),
    )
    for m in d["metrics"]:
        rep.add(Metric(m["name"], m["value"], m["threshold"], m["pass"],
                       m.get("comparison", "<="), m.get("note", "")))
    return rep


def emit_report(report: VerificationReport, fmt: str = "json") -> str:
    """Render a report as a JSON document or a CSV metric summary.

    JSON keys are sorted so two runs of the same configuration differ only
    inside the timings block.
    """
    if fmt == "json":
        return json.dumps(report_to_dict(report), sort_keys=True, indent=2) + "\n"
    if fmt == "csv-summary":
        if not report.metrics:
            raise InvalidInputError("reports must carry at least one metric")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["scenario", "metric", "value", "threshold", "comparison", "pass"])
        for m in report.metrics:
            writer.writerow([report.scenario, m.name, repr(m.value), repr(m.threshold),
                             m.comparison, m.passed])
        return buf.getvalue()
    raise InvalidInputError(f"unknown report format {fmt!r}")
