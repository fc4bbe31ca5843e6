"""Experiment orchestration: configuration, sharded accumulation and reports.

A run enumerates classes shard by shard, turns each class into the flowed
coordinates ``(x, y, s)``, accumulates them in :class:`EmpiricalMeasure`
objects and evaluates the count, marginal or joint tests on the merged
result.  Every step is deterministic given the configuration, and the merged
accumulator does not depend on how the height range was sharded.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import reduce
from importlib import resources

import numpy as np

from . import farey
from .errors import ConfigurationError, NumericError
from .farey import complex_, standard, tree
from .farey.setting import EnumBudget, FareyClass, FareySetting, Kind, shard_bounds
from .flow import (
    complex_x_bin,
    flow_coordinates,
    heisenberg_bin,
    matrix_identity_check,
    tree_x_bin,
)
from .hashing import priority, priority_array
from .limits import LimitLaw, count_constant
from .stats import BinSpec, EmpiricalMeasure, TestResult, ks_against, merge, product_deviation, star_discrepancy

COMMANDS = ("enumerate", "count", "marginal", "joint")
OUT_ENV = "FAREYFLOW_OUT"
CSV_COLUMNS = ("setting", "height", "numerator", "denominator", "s", "y", "x")


def default_thresholds() -> dict[str, float]:
    text = resources.files("fareyflow").joinpath("data/thresholds.json").read_text()
    return {k: float(v) for k, v in json.loads(text)["thresholds"].items()}


# -- configuration ---------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run depends on.

    The height is given either as ``height`` (the geometric height: a bound
    on ``|q|``, or on ``|c|`` so that norms go up to ``height**2``), as
    ``norm`` (an integer norm bound) or, for trees, as the degree bound ``n``.
    """

    command: str
    setting: str = "standard"
    disc: int | None = None
    q: int | None = None
    height: str | None = None
    norm: int | None = None
    n: int | None = None
    t0: float = 0.0
    bins: int = 10
    shards: int = 1
    workers: int = 0
    seed: int = 0
    subsample: float = 1.0
    sample_rows: int = 1000
    out: str | None = None
    format: str = "json"
    timings: bool = False
    thresholds: dict = field(default_factory=default_thresholds)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(f"unknown command {self.command!r}")
        if self.shards < 1:
            raise ConfigurationError("shard count must be >= 1")
        if self.workers < 0:
            raise ConfigurationError("worker count must be >= 0")
        if self.bins < 2:
            raise ConfigurationError("at least two bins are needed")
        if self.format not in ("json", "csv"):
            raise ConfigurationError(f"unknown format {self.format!r}")
        if not 0.0 < self.subsample <= 1.0:
            raise ConfigurationError("subsampling probability must lie in (0, 1]")
        if self.sample_rows < 0:
            raise ConfigurationError("sample row count must be >= 0")
        self.farey_setting()  # validates kind and parameters
        self.bound()
        missing = [k for k in required_thresholds(self) if k not in self.thresholds]
        if missing:
            raise ConfigurationError(f"missing thresholds: {', '.join(missing)}")

    @property
    def kind(self) -> Kind:
        try:
            return Kind(self.setting)
        except ValueError:
            raise ConfigurationError(f"unknown setting {self.setting!r}") from None

    def farey_setting(self) -> FareySetting:
        kind = self.kind
        if kind is Kind.TREE:
            return FareySetting(kind, q=self.q, t0=self.t0)
        if self.q is not None:
            raise ConfigurationError(f"--q applies to the tree setting only, not {kind.value}")
        return FareySetting(kind, disc=self.disc, t0=self.t0)

    def bound(self) -> int:
        """Integer budget height of the run."""
        given = [v is not None for v in (self.height, self.norm, self.n)]
        if sum(given) != 1:
            raise ConfigurationError("give exactly one of --height, --norm and --n")
        kind = self.kind
        if self.n is not None:
            if kind is not Kind.TREE:
                raise ConfigurationError("--n is the degree bound of the tree setting")
            if self.n < 0:
                raise ConfigurationError("degree bound must be >= 0")
            return self.q**self.n
        if self.norm is not None:
            if kind in (Kind.STANDARD, Kind.TREE):
                raise ConfigurationError(f"--norm does not apply to the {kind.value} setting")
            value = self.norm
        else:
            try:
                h = Fraction(str(self.height))
            except (ValueError, ZeroDivisionError):
                raise ConfigurationError(f"bad height {self.height!r}") from None
            square = kind in (Kind.COMPLEX, Kind.HEISENBERG, Kind.QUATERNIONIC)
            value = math.floor(h * h if square else h)
        if value < 1:
            raise ConfigurationError("height bound must be >= 1")
        return int(value)

    def flow_time(self) -> float | int:
        """Flow time at which the classes up to :meth:`bound` sit at ``s >= t0``."""
        X, kind = self.bound(), self.kind
        if kind is Kind.TREE:
            return tree.max_degree(self.farey_setting(), X) + int(self.t0)
        scale = {Kind.STANDARD: 2.0, Kind.COMPLEX: 1.0}.get(kind, 0.5)
        return scale * math.log(X) + self.t0

    def n_workers(self) -> int:
        return self.workers or min(self.shards, os.cpu_count() or 1)

    def echo(self) -> dict:
        d = asdict(self)
        # execution layout and destination do not change any result, so they stay out of the echo
        for key in ("workers", "shards", "timings", "thresholds", "out"):
            d.pop(key)
        d["bound"] = self.bound()
        return d


def required_thresholds(config: ExperimentConfig) -> list[str]:
    kind = config.kind.value
    if config.command == "count":
        return {
            "standard": ["count.standard.constant"],
            "complex": ["count.complex.constant"],
            "heisenberg": ["count.heisenberg.growth"],
        }.get(kind, [])
    if config.command == "marginal":
        return {
            "standard": ["marginal.standard.ks"],
            "complex": ["marginal.complex.ks"],
        }.get(kind, [])
    if config.command == "joint" and kind == "standard":
        return [f"joint.standard.{k}" for k in ("ks", "product_deviation", "x_discrepancy", "y_discrepancy")]
    return []


def parse_config_file(path) -> dict[str, str]:
    """Read a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{no}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_INT_KEYS = {"disc", "q", "norm", "n", "bins", "shards", "workers", "seed", "sample_rows"}
_FLOAT_KEYS = {"t0", "subsample"}


def build_config(command: str, values: dict) -> ExperimentConfig:
    """Config from string or typed values; ``threshold.<name>`` keys override thresholds."""
    kwargs, thresholds = {}, default_thresholds()
    for key, value in values.items():
        if value is None:
            continue
        try:
            if key.startswith("threshold."):
                thresholds[key[len("threshold."):]] = float(value)
            elif key in _INT_KEYS:
                kwargs[key] = int(value)
            elif key in _FLOAT_KEYS:
                kwargs[key] = float(value)
            elif key == "timings":
                kwargs[key] = value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes")
            elif key in ("setting", "height", "out", "format"):
                kwargs[key] = str(value)
            else:
                raise ConfigurationError(f"unknown config key {key!r}")
        except ValueError:
            raise ConfigurationError(f"bad value {value!r} for {key}") from None
    return ExperimentConfig(command, thresholds=thresholds, **kwargs)


# -- reports -----------------------------------------------------------------------


@dataclass
class Report:
    config: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    tests: list[TestResult] = field(default_factory=list)
    samples: list[tuple] = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    include_timings: bool = False

    @property
    def passed(self) -> bool:
        return all(t.passed is not False for t in self.tests)

    def as_dict(self) -> dict:
        d = {
            "config": self.config,
            "counts": self.counts,
            "tests": [t.as_dict() for t in self.tests],
        }
        if self.include_timings:
            d["timings"] = self.timings
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


# -- per-kind accumulation ------------------------------------------------------------


def s_values(config: ExperimentConfig, heights) -> np.ndarray:
    """Excursion parameters of classes of the given heights at the run's flow time."""
    h = np.asarray(heights, dtype=np.int64)
    t = config.flow_time()
    kind = config.kind
    if kind is Kind.TREE:
        deg = np.rint(np.log(np.maximum(h, 1)) / math.log(config.q)).astype(np.int64)
        return (t - deg).astype(float)
    scale = {Kind.STANDARD: 2.0, Kind.COMPLEX: 1.0}.get(kind, 0.5)
    return t - scale * np.log(h.astype(float))


def bin_spec(config: ExperimentConfig) -> BinSpec:
    law = LimitLaw.for_setting(config.farey_setting())
    edges = law.bin_edges(config.bins)
    if config.command != "joint":
        return BinSpec(1, 1, edges)
    kind = config.kind
    if kind is Kind.STANDARD:
        return BinSpec(config.bins, config.bins, edges)
    if kind is Kind.COMPLEX:
        b = coordinate_bins(config)
        return BinSpec(b * b, b * b, edges)
    if kind is Kind.TREE:
        return BinSpec(config.q**2, config.q**2, edges)
    if kind is Kind.HEISENBERG:
        b = coordinate_bins(config)
        return BinSpec(b**3, 1, edges)
    raise ConfigurationError(f"joint statistics are not available for the {kind.value} setting")


def coordinate_bins(config: ExperimentConfig) -> int:
    """Bins per real coordinate for the multi-dimensional horosphere quotients."""
    return max(2, math.isqrt(config.bins) if config.kind is Kind.COMPLEX else round(config.bins ** (1 / 3)))


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, tuple):
        return "(" + ",".join(_fmt(v) for v in x) + ")"
    return str(x)


def _row(config, cls: FareyClass, s, y, x) -> tuple:
    num = cls.numerator
    num = "(" + ",".join(str(v) for v in num) + ")" if isinstance(num, tuple) else str(num)
    return (cls.setting.label(), cls.height, num, str(cls.denominator), _fmt(float(s)), _fmt(y), _fmt(x))


def class_priority(cls: FareyClass, seed: int) -> int:
    key = []
    for part in (cls.numerator, cls.denominator):
        for v in part if isinstance(part, tuple) else (part,):
            key.extend(v.key() if hasattr(v, "key") else (v,))
            key.append(-(1 << 40))
    return priority(key, seed)


def _budget(config: ExperimentConfig, lo: int, hi: int) -> EnumBudget:
    return EnumBudget(config.bound(), (lo, hi), config.subsample, config.seed)


def _standard_shard(config: ExperimentConfig, lo: int, hi: int) -> EmpiricalMeasure:
    spec = bin_spec(config)
    joint = config.command == "joint"
    acc = EmpiricalMeasure(spec, keep_samples=joint, reservoir_size=config.sample_rows)
    label = config.farey_setting().label()
    for p, q in standard.batches(_budget(config, lo, hi)):
        s = s_values(config, q)
        if joint:
            ybar = (-standard.inverse_mod_array(p, q)) % q
            x_bin = (config.bins * p) // q
            y_bin = (config.bins * ybar) // q
            x, y = p / q, ybar / q
        else:
            x_bin = y_bin = np.zeros(p.size, np.int64)
        records = ()
        if config.sample_rows and p.size:
            pri = priority_array([p, q], config.seed)
            keep = np.argsort(pri, kind="stable")[: config.sample_rows]
            records = [
                (
                    int(pri[i]),
                    (
                        label,
                        int(q[i]),
                        str(int(p[i])),
                        str(int(q[i])),
                        repr(float(s[i])),
                        f"{int(ybar[i])}/{int(q[i])}" if joint else "",
                        f"{int(p[i])}/{int(q[i])}",
                    ),
                )
                for i in keep
            ]
        if joint:
            acc.add(x_bin, y_bin, spec.s_bin(s), q, x, y, records)
        else:
            acc.add(x_bin, y_bin, spec.s_bin(s), q, records=records)
    return acc.consolidate()


def _complex_counts_shard(config: ExperimentConfig, lo: int, hi: int) -> EmpiricalMeasure:
    """Complex marginal from per-denominator counts: one entry per height."""
    spec = bin_spec(config)
    acc = EmpiricalMeasure(spec)
    if hi <= lo:
        return acc
    norms, counts = complex_.per_denominator_counts(config.disc, hi)
    keep = norms > lo
    norms, counts = norms[keep], counts[keep]
    heights = np.repeat(norms, counts)
    zeros = np.zeros(heights.size, np.int64)
    return acc.add(zeros, zeros, spec.s_bin(s_values(config, heights)), heights)


def _class_bins(config: ExperimentConfig, cls: FareyClass, fp) -> tuple[int, int, object, object]:
    """``(x_bin, y_bin, y repr, x repr)`` of a class in a joint run."""
    kind = config.kind
    if kind is Kind.COMPLEX:
        b = coordinate_bins(config)
        x1, x2 = complex_x_bin(cls.setting, cls.numerator, cls.denominator, b)
        y1, y2 = complex_x_bin(cls.setting, fp.y.numerator, fp.y.denominator, b)
        return x1 * b + x2, y1 * b + y2, (y1, y2), (x1, x2)
    if kind is Kind.TREE:
        xb = tree_x_bin(cls.numerator, cls.denominator, 2)
        yb = tree_x_bin(fp.y.numerator, fp.y.denominator, 2)
        return xb, yb, yb, xb
    if kind is Kind.HEISENBERG:
        b = coordinate_bins(config)
        hb = heisenberg_bin(cls, b)
        return (hb[0] * b + hb[1]) * b + hb[2], 0, "", hb
    raise ConfigurationError(f"joint statistics are not available for the {kind.value} setting")


def _generic_shard(config: ExperimentConfig, lo: int, hi: int) -> EmpiricalMeasure:
    spec = bin_spec(config)
    joint = config.command == "joint"
    setting = config.farey_setting()
    t = config.flow_time()
    acc = EmpiricalMeasure(spec, reservoir_size=config.sample_rows)
    xb, yb, hs, records = [], [], [], []
    for cls in farey.enumerate_classes(setting, _budget(config, lo, hi)):
        if joint:
            fp = flow_coordinates(cls, t)
            x_bin, y_bin, y_repr, x_repr = _class_bins(config, cls, fp)
            s = fp.s
        else:
            x_bin = y_bin = 0
            y_repr = x_repr = ""
            s = s_values(config, [cls.height])[0]
        xb.append(x_bin)
        yb.append(y_bin)
        hs.append(cls.height)
        if config.sample_rows:
            records.append((class_priority(cls, config.seed), _row(config, cls, s, y_repr, x_repr)))
            if len(records) > 4 * config.sample_rows:
                records = sorted(records)[: config.sample_rows]
    s_all = s_values(config, hs)
    return acc.add(xb, yb, spec.s_bin(s_all), np.asarray(hs, np.int64), records=records)


def accumulate_shard(config: ExperimentConfig, lo: int, hi: int) -> EmpiricalMeasure:
    """Accumulator for the classes with ``lo < height <= hi``."""
    kind = config.kind
    if kind is Kind.STANDARD:
        return _standard_shard(config, lo, hi)
    if kind is Kind.COMPLEX and config.command == "marginal":
        return _complex_counts_shard(config, lo, hi)
    return _generic_shard(config, lo, hi)


def _work_exponent(kind: Kind) -> float:
    return {Kind.STANDARD: 2.0, Kind.COMPLEX: 2.0, Kind.HEISENBERG: 2.0, Kind.QUATERNIONIC: 5.0}.get(kind, 2.0)


def accumulate(config: ExperimentConfig) -> EmpiricalMeasure:
    """Run every shard, in worker processes when more than one worker is allowed."""
    bounds = shard_bounds(config.bound(), config.shards, _work_exponent(config.kind))
    workers = config.n_workers()
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(accumulate_shard, [config] * len(bounds), *zip(*bounds)))
    else:
        parts = [accumulate_shard(config, lo, hi) for lo, hi in bounds]
    return reduce(merge, parts)


# -- prechecks ---------------------------------------------------------------------------


def identity_precheck(config: ExperimentConfig, limit: int = 200) -> int:
    """Exact flow identity on the smallest classes of the run; raises on failure."""
    kind = config.kind
    if kind not in (Kind.STANDARD, Kind.COMPLEX, Kind.TREE):
        return 0
    setting = config.farey_setting()
    checked = 0
    for cls in farey.enumerate_classes(setting, EnumBudget(config.bound())):
        if checked >= limit:
            break
        unit = {
            Kind.STANDARD: lambda: cls.denominator == 1,
            Kind.COMPLEX: lambda: cls.denominator.is_unit(),
            Kind.TREE: lambda: cls.denominator.degree() == 0,
        }[kind]()
        if unit:
            continue
        if not matrix_identity_check(cls):
            raise NumericError(f"flow identity fails for {cls.numerator}/{cls.denominator}")
        checked += 1
    return checked


# -- tests --------------------------------------------------------------------------------


def _threshold(config, key):
    return config.thresholds.get(key)


def count_tests(config: ExperimentConfig, report: Report) -> None:
    setting = config.farey_setting()
    kind = config.kind
    X = config.bound()
    const = count_constant(setting)
    if kind is Kind.QUATERNIONIC:
        per_norm = [0] * (X + 1)
        for cls in farey.enumerate_classes(setting, EnumBudget(X)):
            per_norm[cls.height] += 1
        card = sum(per_norm)
    else:
        card = farey.cardinality(setting, X)
    predicted = const.value * float(X) ** const.exponent
    report.counts.update({"bound": X, "cardinality": card, "constant": const.value, "predicted": predicted})
    ratio = card / predicted
    key = f"count.{kind.value}.constant"
    report.tests.append(TestResult(key, abs(ratio - 1), card, _threshold(config, key)))
    if kind is Kind.HEISENBERG:
        card4 = farey.cardinality(setting, 4 * X)
        growth = card4 / card
        report.counts.update({"cardinality_doubled_height": card4, "growth_ratio": growth})
        key = "count.heisenberg.growth"
        report.tests.append(TestResult(key, abs(growth / 16 - 1), card4, _threshold(config, key)))
    elif kind is Kind.QUATERNIONIC:
        stalls = sum(1 for v in per_norm[1:] if v == 0)
        report.counts["per_norm"] = per_norm[1:]
        report.tests.append(TestResult("count.quaternionic.monotone", float(stalls), card, 0.0))
    elif kind is Kind.TREE:
        n = tree.max_degree(setting, X)
        enumerated = sum(1 for _ in farey.enumerate_classes(setting, EnumBudget(X)))
        closed = const.closed_form(n)
        report.counts.update({"degree": n, "enumerated": enumerated, "closed_form": closed})
        report.counts["exact_match"] = enumerated == closed
        report.tests.append(TestResult("count.tree.exact", float(abs(enumerated - closed)), enumerated, 0.0))
        leading = Fraction(setting.q, setting.q**2 - 1)
        diff = abs(leading - const.breakdown["exact"]) / leading
        report.tests.append(TestResult("count.tree.leading_constant", float(diff), enumerated, 0.0))


def _s_tests(config: ExperimentConfig, acc: EmpiricalMeasure, prefix: str, report: Report) -> None:
    setting = config.farey_setting()
    law = LimitLaw.for_setting(setting)
    s = s_values(config, acc.heights)
    key = f"{prefix}.{config.kind.value}.ks"
    report.tests.append(ks_against(law, s, weights=acc.height_counts, threshold=_threshold(config, key), name=key))
    kind = config.kind
    if kind is Kind.STANDARD:
        # points with s >= s(q_j) are exactly those with height <= q_j
        order = np.argsort(-s, kind="stable")
        tail = np.cumsum(acc.height_counts[order])
        exact = np.cumsum(standard.totients(config.bound())[1:])
        err = int(np.max(np.abs(tail - exact[acc.heights[order] - 1]))) if config.subsample == 1.0 else None
        if err is not None:
            report.tests.append(TestResult(f"{prefix}.standard.structural_identity", float(err), acc.count, 0.0))
    elif kind is Kind.COMPLEX and prefix == "marginal" and config.subsample == 1.0:
        order = np.argsort(-s, kind="stable")
        tail = np.cumsum(acc.height_counts[order])
        grid = acc.heights[order]
        picks = np.unique(np.linspace(0, grid.size - 1, min(25, grid.size)).astype(int))
        err = max(abs(int(tail[i]) - complex_.cardinality(config.disc, int(grid[i]))) for i in picks)
        report.tests.append(TestResult("marginal.complex.structural_identity", float(err), acc.count, 0.0))
    elif kind is Kind.TREE and config.subsample == 1.0:
        q, N = config.q, tree.max_degree(setting, config.bound())
        by_deg = {int(round(math.log(h, q))): int(c) for h, c in zip(acc.heights, acc.height_counts)}
        expected = {d: 1 if d == 0 else q ** (2 * d - 1) for d in range(N + 1)}
        err = sum(abs(by_deg.get(d, 0) - expected[d]) for d in expected) + sum(1 for d in by_deg if d not in expected)
        report.tests.append(TestResult(f"{prefix}.tree.levels_exact", float(err), acc.count, 0.0))
        # beyond the constant class the level masses are proportional to the limit masses
        t = config.flow_time()
        ratios = {Fraction(by_deg.get(d, 0)) / law.pmf(t - d) for d in range(1, N + 1)}
        spread = float(max(ratios) / min(ratios) - 1) if ratios else 0.0
        report.tests.append(TestResult(f"{prefix}.tree.level_proportionality", spread, acc.count, 0.0))
        total = sum(by_deg.values())
        tv = 0.5 * sum(abs(by_deg.get(t - m, 0) / total - float(law.pmf(m))) for m in range(int(law.t0), t + 1))
        tv += 0.5 * float(1 - sum(law.pmf(m) for m in range(int(law.t0), t + 1)))
        report.tests.append(TestResult(f"{prefix}.tree.total_variation", tv, acc.count, None))


def marginal_tests(config: ExperimentConfig, acc: EmpiricalMeasure, report: Report) -> None:
    _s_tests(config, acc, "marginal", report)


def joint_tests(config: ExperimentConfig, acc: EmpiricalMeasure, report: Report) -> None:
    kind = config.kind.value
    _s_tests(config, acc, "joint", report)
    hist = acc.hist if config.kind is not Kind.HEISENBERG else acc.hist.sum(axis=1)
    key = f"joint.{kind}.product_deviation"
    report.tests.append(product_deviation(hist, threshold=_threshold(config, key), name=key))
    if config.kind is Kind.STANDARD:
        for axis, samples in (("x", acc.x_samples), ("y", acc.y_samples)):
            key = f"joint.standard.{axis}_discrepancy"
            report.tests.append(star_discrepancy(samples, threshold=_threshold(config, key), name=key))
    report.counts["histogram_shape"] = list(acc.hist.shape)


def enumerate_rows(config: ExperimentConfig):
    """CSV rows of every class in the budget with its flowed coordinates."""
    setting = config.farey_setting()
    t = config.flow_time()
    for cls in farey.enumerate_classes(setting, _budget(config, 0, config.bound())):
        fp = flow_coordinates(cls, t)
        if config.kind is Kind.STANDARD:
            y, x = str(fp.y), f"{cls.numerator}/{cls.denominator}"
        elif fp.y is not None:
            y, x = f"{fp.y.numerator}/{fp.y.denominator}", f"{cls.numerator}/{cls.denominator}"
        elif config.kind is Kind.HEISENBERG:
            y, x = "", heisenberg_bin(cls, config.bins)
        else:
            y = x = ""
        yield _row(config, cls, fp.s, y, x)


def run_experiment(config: ExperimentConfig) -> Report:
    """Execute the configured run and return its report (nothing is written)."""
    report = Report(config=config.echo(), include_timings=config.timings)
    clock = time.perf_counter
    start = clock()
    if config.command == "enumerate":
        report.samples = list(enumerate_rows(config))
        report.counts["classes"] = len(report.samples)
    elif config.command == "count":
        count_tests(config, report)
    else:
        report.counts["identity_checked"] = identity_precheck(config)
        mark = clock()
        report.timings["precheck"] = mark - start
        acc = accumulate(config)
        report.timings["accumulate"] = clock() - mark
        report.counts.update({"bound": config.bound(), "classes": acc.count, "flow_time": config.flow_time()})
        report.samples = [row for _, row in acc.reservoir]
        (marginal_tests if config.command == "marginal" else joint_tests)(config, acc, report)
    report.timings["total"] = clock() - start
    return report

