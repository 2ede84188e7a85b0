"""Command-line scenario runner.

    modpdo run <scenario> [--config cfg.json] [--out report.json]
                [--emit-plots] [--oracle]

Exit codes: 0 all metrics pass; 1 a metric failed; 2 usage or config
error; 3 a regularized limit failed to converge.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .errors import ConfigError
from .report import emit_report
from .scenarios import SCENARIOS, ScenarioConfig, run_scenario

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modpdo",
        description="Scenario-driven verification of the sampled operator calculus",
    )
    sub = parser.add_subparsers(dest="command")
    run = sub.add_parser("run", help="run one verification scenario")
    run.add_argument("scenario", help=f"one of: {', '.join(sorted(SCENARIOS))}")
    run.add_argument("--config", type=Path, default=None,
                     help="JSON config document (schema_version 1)")
    run.add_argument("--out", type=Path, default=None,
                     help="write the JSON report here (stdout otherwise)")
    run.add_argument("--emit-plots", action="store_true",
                     help="write plot-data CSV next to the report")
    run.add_argument("--oracle", action="store_true",
                     help="switch product/quantization to brute-force paths")
    return parser


def _load_config(scenario: str, path: Path | None, oracle: bool) -> ScenarioConfig:
    raw = {"scenario": scenario}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config document must be a JSON object")
        if "scenario" in data and data["scenario"] != scenario:
            raise ConfigError(
                f"config names scenario {data['scenario']!r} but {scenario!r} was requested"
            )
        raw.update(data)
        raw["scenario"] = scenario
    cfg = ScenarioConfig.from_dict(raw)
    cfg.use_oracle = oracle
    return cfg


def _write_plots(report, out: Path):
    path = out.with_name(out.stem + "_plots.csv")
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["x", "value", "series"])
        for x, value, series in report.plot_rows:
            writer.writerow([x, repr(float(value)), series])
    return path


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command != "run":
        parser.print_help()
        return EXIT_USAGE

    try:
        cfg = _load_config(args.scenario, args.config, args.oracle)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report = run_scenario(cfg)
    payload = emit_report(report, "json")
    out = args.out or (Path(cfg.output_path) if cfg.output_path else None)
    if out is not None:
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(payload, encoding="utf-8")
            out.with_suffix(".csv").write_text(emit_report(report, "csv-summary"),
                                               encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write report to {out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if args.emit_plots:
            _write_plots(report, out)
    else:
        sys.stdout.write(payload)
        if args.emit_plots:
            print("note: --emit-plots needs --out to place the CSV", file=sys.stderr)

    for metric in report.metrics:
        status = "pass" if metric.passed else "FAIL"
        print(f"[{status}] {report.scenario}/{metric.name}: "
              f"{metric.value:.6e} {metric.comparison} {metric.threshold:.6e}",
              file=sys.stderr)

    if report.error_class == "convergence":
        return EXIT_CONVERGENCE
    return EXIT_PASS if report.overall_pass else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
