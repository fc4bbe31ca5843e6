"""Mergeable accumulators and the statistics that compare them with limit laws."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError
from .limits import LimitLaw


@dataclass(frozen=True)
class BinSpec:
    """Binning of ``(x, y, s)``: equal bins on the unit square and explicit ``s`` edges."""

    x_bins: int = 10
    y_bins: int = 10
    s_edges: tuple[float, ...] = (0.0, math.inf)

    def __post_init__(self):
        if self.x_bins < 1 or self.y_bins < 1:
            raise ConfigurationError("bin counts must be positive")
        edges = tuple(float(e) for e in self.s_edges)
        if len(edges) < 2 or any(b <= a for a, b in zip(edges, edges[1:])):
            raise ConfigurationError("s edges must increase strictly")
        object.__setattr__(self, "s_edges", edges)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.x_bins, self.y_bins, len(self.s_edges) - 1

    def s_bin(self, s) -> np.ndarray:
        """Bin index of each ``s``; values below the first edge go to bin 0."""
        idx = np.searchsorted(np.asarray(self.s_edges), np.asarray(s, dtype=float), side="right") - 1
        return np.clip(idx, 0, len(self.s_edges) - 2)


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # not a pytest test class

    name: str
    statistic: float
    n: int
    threshold: float | None = None

    @property
    def passed(self) -> bool | None:
        if self.threshold is None:
            return None
        return bool(self.statistic <= self.threshold)

    def with_threshold(self, threshold: float | None, name: str | None = None) -> TestResult:
        return TestResult(name or self.name, self.statistic, self.n, threshold)

    def as_dict(self) -> dict:
        return {"name": self.name, "statistic": self.statistic, "n": self.n,
                "threshold": self.threshold, "pass": self.passed}


def _merge_counts(v1, c1, v2, c2):
    values = np.concatenate([v1, v2])
    counts = np.concatenate([c1, c2])
    if values.size == 0:
        return values.astype(np.int64), counts.astype(np.int64)
    uniq, inv = np.unique(values, return_inverse=True)
    return uniq, np.bincount(inv, weights=counts, minlength=uniq.size).astype(np.int64)


@dataclass
class EmpiricalMeasure:
    """Counts of Farey points by bin and by exact height.

    ``heights``/``height_counts`` record the multiset of exact integer heights,
    which determines the ``s``-marginal exactly.  Sorted coordinate buffers are
    kept only when ``keep_samples`` is set; :meth:`add` queues batches and
    :meth:`consolidate` (called by merging and comparison) sorts them in.  ``reservoir`` keeps the ``k``
    records of smallest hash priority, which makes it independent of the
    order of accumulation.
    """

    spec: BinSpec
    keep_samples: bool = False
    reservoir_size: int = 0
    count: int = 0
    hist: np.ndarray = None
    heights: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64))
    height_counts: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64))
    x_samples: np.ndarray | None = None
    y_samples: np.ndarray | None = None
    reservoir: list = field(default_factory=list)

    def __post_init__(self):
        if self.hist is None:
            self.hist = np.zeros(self.spec.shape, dtype=np.int64)
        if self.keep_samples and self.x_samples is None:
            self.x_samples = np.zeros(0)
            self.y_samples = np.zeros(0)
        self._pending = []

    def consolidate(self) -> EmpiricalMeasure:
        """Fold buffered coordinate batches into the sorted sample arrays."""
        if self._pending:
            xs, ys = zip(*self._pending)
            self.x_samples = np.sort(np.concatenate([self.x_samples, *xs]))
            self.y_samples = np.sort(np.concatenate([self.y_samples, *ys]))
            self._pending = []
        return self

    def add(self, x_bin, y_bin, s_bin, heights, x=None, y=None, records=()):
        """Add a batch of points given by integer bins and exact heights.

        ``records`` is an iterable of ``(priority, row)`` pairs for the reservoir.
        """
        x_bin, y_bin, s_bin = (np.asarray(a, dtype=np.int64) for a in (x_bin, y_bin, s_bin))
        n = x_bin.size
        if not (y_bin.size == s_bin.size == n == np.size(heights)):
            raise DomainError("batch arrays differ in length")
        if n == 0:
            return self
        flat = np.ravel_multi_index((x_bin, y_bin, s_bin), self.spec.shape)
        self.hist += np.bincount(flat, minlength=self.hist.size).reshape(self.spec.shape)
        self.count += n
        hv, hc = np.unique(np.asarray(heights, dtype=np.int64), return_counts=True)
        self.heights, self.height_counts = _merge_counts(self.heights, self.height_counts, hv, hc)
        if self.keep_samples:
            if x is None or y is None:
                raise DomainError("this accumulator keeps coordinate samples")
            self._pending.append((np.asarray(x, float), np.asarray(y, float)))
        if self.reservoir_size:
            self.reservoir = sorted([*self.reservoir, *records])[: self.reservoir_size]
        return self

    def merge(self, other: EmpiricalMeasure) -> EmpiricalMeasure:
        return merge(self, other)

    def __eq__(self, other):
        if not isinstance(other, EmpiricalMeasure):
            return NotImplemented
        self.consolidate()
        other.consolidate()
        same_samples = (self.x_samples is None) == (other.x_samples is None) and (
            self.x_samples is None
            or (np.array_equal(self.x_samples, other.x_samples) and np.array_equal(self.y_samples, other.y_samples))
        )
        return (
            self.spec == other.spec
            and self.keep_samples == other.keep_samples
            and self.reservoir_size == other.reservoir_size
            and self.count == other.count
            and np.array_equal(self.hist, other.hist)
            and np.array_equal(self.heights, other.heights)
            and np.array_equal(self.height_counts, other.height_counts)
            and same_samples
            and self.reservoir == other.reservoir
        )

    # marginals
    def marginal(self, axis: str) -> np.ndarray:
        keep = {"x": 0, "y": 1, "s": 2}[axis]
        return self.hist.sum(axis=tuple(i for i in range(3) if i != keep))

    def tail_count(self, height: int) -> int:
        """Number of points with height at most ``height``."""
        return int(self.height_counts[self.heights <= height].sum())


def merge(a: EmpiricalMeasure, b: EmpiricalMeasure) -> EmpiricalMeasure:
    """Combine two accumulators; commutative and associative."""
    if (a.spec, a.keep_samples, a.reservoir_size) != (b.spec, b.keep_samples, b.reservoir_size):
        raise ConfigurationError("cannot merge accumulators with different binning")
    a.consolidate()
    b.consolidate()
    heights, counts = _merge_counts(a.heights, a.height_counts, b.heights, b.height_counts)
    out = EmpiricalMeasure(
        a.spec,
        a.keep_samples,
        a.reservoir_size,
        a.count + b.count,
        a.hist + b.hist,
        heights,
        counts,
    )
    if a.keep_samples:
        out.x_samples = np.sort(np.concatenate([a.x_samples, b.x_samples]))
        out.y_samples = np.sort(np.concatenate([a.y_samples, b.y_samples]))
    if a.reservoir_size:
        out.reservoir = sorted([*a.reservoir, *b.reservoir])[: a.reservoir_size]
    return out


# -- statistics ----------------------------------------------------------------


def ks_against(law: LimitLaw, samples=None, *, weights=None, threshold=None, name="ks") -> TestResult:
    """Kolmogorov-Smirnov distance between the empirical law and ``law``.

    ``weights`` gives integer multiplicities of the sample values.  The
    supremum is evaluated exactly at the jumps of the empirical step function,
    using left limits of both distribution functions.
    """
    values = np.asarray(samples, dtype=float).ravel()
    if values.size == 0:
        raise DomainError("no samples")
    w = np.ones(values.size, dtype=np.int64) if weights is None else np.asarray(weights, dtype=np.int64)
    order = np.argsort(values, kind="stable")
    values, w = values[order], w[order]
    uniq, start = np.unique(values, return_index=True)
    mass = np.add.reduceat(w, start)
    total = int(mass.sum())
    if total <= 0:
        raise DomainError("no samples")
    right = np.cumsum(mass) / total
    left = right - mass / total
    stat = max(
        float(np.max(np.abs(right - np.asarray(law.cdf(uniq))))),
        float(np.max(np.abs(left - np.asarray(law.cdf_left(uniq))))),
    )
    return TestResult(name, stat, total, threshold)


def star_discrepancy(points, *, threshold=None, name="star_discrepancy") -> TestResult:
    """Star discrepancy of points in ``[0, 1)`` or ``[0, 1)^2``.

    One-dimensional input uses the sorted-order formula.  Two-dimensional input
    evaluates open and closed anchored boxes at every corner formed by sample
    coordinates and 1; memory grows with the product of distinct coordinates.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 or (pts.ndim == 2 and pts.shape[1] == 1):
        x = np.sort(pts.ravel())
        n = x.size
        if n == 0:
            raise DomainError("no points")
        i = np.arange(1, n + 1)
        stat = float(max(np.max(i / n - x), np.max(x - (i - 1) / n)))
        return TestResult(name, stat, n, threshold)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DomainError("points must be one- or two-dimensional")
    n = pts.shape[0]
    if n == 0:
        raise DomainError("no points")
    xs = np.unique(np.append(pts[:, 0], 1.0))
    ys = np.unique(np.append(pts[:, 1], 1.0))
    ix = np.searchsorted(xs, pts[:, 0])
    iy = np.searchsorted(ys, pts[:, 1])
    grid = np.zeros((xs.size, ys.size), dtype=np.int64)
    np.add.at(grid, (ix, iy), 1)
    closed = grid.cumsum(0).cumsum(1)  # points with x <= xs[a], y <= ys[b]
    # points with x < xs[a], y < ys[b]
    opened = np.zeros_like(closed)
    opened[1:, 1:] = closed[:-1, :-1]
    area = np.outer(xs, ys)
    stat = float(max(np.max(closed / n - area), np.max(area - opened / n)))
    return TestResult(name, stat, n, threshold)


def product_deviation(hist, *, threshold=None, name="product_deviation") -> TestResult:
    """Relative L2 distance between a joint histogram and the product of its marginals."""
    h = np.asarray(hist, dtype=float)
    if h.ndim < 2 or any(n < 2 for n in h.shape):
        raise DomainError("every axis needs at least two bins")
    total = h.sum()
    if total <= 0:
        raise DomainError("empty histogram")
    p = h / total
    prod = np.ones(())
    for axis in range(h.ndim):
        marg = p.sum(axis=tuple(i for i in range(h.ndim) if i != axis))
        prod = np.multiply.outer(prod, marg)
    stat = float(np.linalg.norm((p - prod).ravel()) / np.linalg.norm(prod.ravel()))
    return TestResult(name, stat, int(total), threshold)
