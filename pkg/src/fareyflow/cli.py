"""Enumerate Farey classes and test their equidistribution under the geodesic flow.

Exit codes: 0 success, 1 a gated test failed, 2 configuration error,
3 numeric or oracle failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .errors import ConfigurationError, NumericError
from .pipeline import CSV_COLUMNS, OUT_ENV, Report, build_config, parse_config_file, run_experiment
from .stats import TestResult

EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 1, 2, 3, 4
_TEST_COLUMNS = ("name", "statistic", "n", "threshold", "pass")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(report: Report, fmt: str) -> dict[str, str]:
    """File name to content; the same report always renders to the same bytes."""
    if fmt == "json":
        files = {"report.json": report.to_json()}
    elif fmt == "csv":
        rows = [[_cell(t.as_dict()[k]) for k in _TEST_COLUMNS] for t in report.tests]
        files = {"report.csv": _csv_text(_TEST_COLUMNS, rows)}
    else:
        raise ConfigurationError(f"unknown format {fmt!r}")
    if report.samples:
        files["samples.csv"] = _csv_text(CSV_COLUMNS, report.samples)
    return files


def output_dir(out: str | None) -> Path:
    return Path(out or os.environ.get(OUT_ENV) or "fareyflow-out")


def emit_report(report: Report, fmt: str, out: str | Path | None = None) -> list[Path]:
    """Write the report files and return their paths."""
    directory = output_dir(str(out) if out is not None else None)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in render(report, fmt).items():
        path = directory / name
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        paths.append(path)
    return paths


def load_report(path: str | Path) -> Report:
    """Read a JSON report back, with ``samples.csv`` from the same directory if present."""
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    tests = [TestResult(t["name"], t["statistic"], t["n"], t["threshold"]) for t in data.get("tests", [])]
    report = Report(data.get("config", {}), data.get("counts", {}), tests)
    if "timings" in data:
        report.timings, report.include_timings = data["timings"], True
    samples = path.with_name("samples.csv")
    if samples.exists():
        with open(samples, encoding="utf-8", newline="") as fh:
            report.samples = [tuple(r) for r in list(csv.reader(fh))[1:]]
    return report


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--setting", choices=["standard", "complex", "heisenberg", "quaternionic", "tree"])
    p.add_argument("--disc", type=int, help="fundamental discriminant (complex, heisenberg)")
    p.add_argument("--q", type=int, help="field order (tree)")
    p.add_argument("--height", help="geometric height bound; norms go up to its square")
    p.add_argument("--norm", type=int, help="integer norm bound (complex, heisenberg, quaternionic)")
    p.add_argument("--n", type=int, help="degree bound (tree)")
    p.add_argument("--t0", type=float)
    p.add_argument("--bins", type=int)
    p.add_argument("--shards", type=int)
    p.add_argument("--workers", type=int, help="worker processes; 0 means one per shard up to the CPU count")
    p.add_argument("--seed", type=int)
    p.add_argument("--subsample", type=float, help="keep each class with this probability")
    p.add_argument("--sample-rows", dest="sample_rows", type=int, help="size of the CSV sample dump")
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./fareyflow-out)")
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--timings", action="store_true", default=None, help="include wall-clock timings")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fareyflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_flags(sub.add_parser("enumerate", help="dump canonical classes with flowed coordinates"))
    verify = sub.add_parser("verify", help="run a verification experiment")
    vsub = verify.add_subparsers(dest="what", required=True)
    for name, text in (
        ("count", "exact counts against the counting constants"),
        ("marginal", "excursion parameter against its limit law"),
        ("joint", "joint (x, y, s) statistics"),
    ):
        _add_run_flags(vsub.add_parser(name, help=text))
    rep = sub.add_parser("report", help="re-emit a saved JSON report")
    rep.add_argument("input", help="path of a report.json")
    rep.add_argument("--out")
    rep.add_argument("--format", choices=["json", "csv"], default="json")
    return parser


def _summary(report: Report, paths, stream) -> None:
    for t in report.tests:
        status = {True: "PASS", False: "FAIL", None: "INFO"}[t.passed]
        limit = "" if t.threshold is None else f" (threshold {t.threshold:g})"
        print(f"{status} {t.name}: {t.statistic:.6g}{limit}", file=stream)
    for path in paths:
        print(f"wrote {path}", file=stream)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "report":
            report = load_report(args.input)
            fmt, out = args.format, args.out
        else:
            command = args.command if args.command == "enumerate" else args.what
            values = parse_config_file(args.config) if args.config else {}
            flags = {k: v for k, v in vars(args).items() if k not in ("command", "what", "config") and v is not None}
            values.update(flags)
            config = build_config(command, values)
            report = run_experiment(config)
            fmt, out = config.format, config.out
        paths = emit_report(report, fmt, out)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, json.JSONDecodeError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    _summary(report, paths, sys.stdout)
    return 0 if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
