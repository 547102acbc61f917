"""Bin counting, range filters, and the two opacity scalings.

Bins are half-open ``[a, b)`` except the last bin of an axis, which is
closed so the range maximum is representable. Counts are 64-bit integers;
filtering is conjunctive across all eight attributes with inclusive bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .model import (
    MIN_SEGMENT_LENGTH,
    N_ATTRIBUTES,
    AttributeId,
    CategoryMode,
    Dataset,
    attribute_index,
    category_count,
)


class Scaling(str, Enum):
    """Tile opacity normalization: per-bin share or log share of the category total."""

    LOCAL = "local"
    GLOBAL = "global"


@dataclass(frozen=True)
class FilterState:
    """Per-attribute selected (lo, hi) ranges, in attribute units."""

    ranges: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.ranges) != N_ATTRIBUTES:
            raise ValueError(f"expected {N_ATTRIBUTES} ranges, got {len(self.ranges)}")
        for i, (lo, hi) in enumerate(self.ranges):
            if lo > hi:
                raise ValueError(f"inverted range for attribute {i}: ({lo}, {hi})")

    @classmethod
    def full(cls, dataset: Dataset) -> "FilterState":
        """The widest selectable ranges: [0,1] per fraction attribute and the
        full length span."""
        max_len = max(dataset.attribute_ranges[7][1], float(MIN_SEGMENT_LENGTH))
        return cls(
            ranges=tuple([(0.0, 1.0)] * 7) + ((float(MIN_SEGMENT_LENGTH), max_len),)
        )

    def range_for(self, attr: AttributeId | int) -> tuple[float, float]:
        return self.ranges[attribute_index(attr)]


def apply_filter(
    state: FilterState, attr: AttributeId | int, lo: float, hi: float
) -> FilterState:
    """Return a new FilterState with one attribute's range replaced."""
    index = attribute_index(attr)
    if lo > hi:
        raise ValueError(f"inverted range ({lo}, {hi})")
    if index < 7:
        if lo < 0.0 or hi > 1.0:
            raise ValueError(f"range ({lo}, {hi}) outside [0, 1]")
    elif lo < MIN_SEGMENT_LENGTH:
        raise ValueError(f"length filter below {MIN_SEGMENT_LENGTH}: {lo}")
    ranges = list(state.ranges)
    ranges[index] = (float(lo), float(hi))
    return replace(state, ranges=tuple(ranges))


def bin_index(value: float, lo: float, hi: float, n: int) -> int:
    """Bin of ``value`` on an axis of ``n`` half-open bins over [lo, hi].

    ``value == hi`` lands in the last bin. Values outside [lo, hi] are a
    range error; the caller filters them out first.
    """
    if n < 1:
        raise ValueError(f"bin count must be >= 1, got {n}")
    if lo >= hi:
        raise ValueError(f"axis range must satisfy lo < hi, got ({lo}, {hi})")
    if value < lo or value > hi:
        raise ValueError(f"value {value} outside axis range [{lo}, {hi}]")
    if value == hi:
        return n - 1
    return min(int(math.floor(n * (value - lo) / (hi - lo))), n - 1)


def _bin_indices(values: np.ndarray, lo: float, hi: float, n: int) -> np.ndarray:
    """Vectorized bin_index for values already inside [lo, hi]."""
    if lo == hi or n == 1:
        return np.zeros(len(values), dtype=np.int64)
    idx = np.floor(n * (values - lo) / (hi - lo)).astype(np.int64)
    return np.clip(idx, 0, n - 1)


def filter_mask(dataset: Dataset, filters: FilterState) -> np.ndarray:
    """Boolean mask of segments inside every attribute's selected range."""
    mask = np.ones(len(dataset), dtype=bool)
    for i in range(N_ATTRIBUTES):
        lo, hi = filters.ranges[i]
        col = dataset.attribute_column(i)
        mask &= (col >= lo) & (col <= hi)
    return mask


def _effective_bins(lo: float, hi: float, n: int) -> int:
    # A degenerate (lo == hi) axis collapses to a single bin.
    return 1 if lo == hi else n


@dataclass(frozen=True, eq=False)
class BinGrid:
    """Per-category counts on one scatterplot cell's 2D bin lattice.

    ``counts`` is (nx, ny, ncat) int64; ``bin_totals`` its sum over
    categories. ``category_totals`` are the dataset-wide per-category counts
    (constant under filtering) used by the global scaling.
    """

    attr_x: AttributeId
    attr_y: AttributeId
    nx: int
    ny: int
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    counts: np.ndarray
    bin_totals: np.ndarray
    mode: CategoryMode
    category_totals: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class HistGrid:
    """Per-category counts on one histogram's 1D bin lattice."""

    attr: AttributeId
    n: int
    value_range: tuple[float, float]
    counts: np.ndarray
    mode: CategoryMode
    category_totals: tuple[int, ...]


def compute_scatter_bins(
    dataset: Dataset,
    attr_x: AttributeId | int,
    attr_y: AttributeId | int,
    nx: int,
    ny: int,
    filters: FilterState,
    mode: CategoryMode,
    mask: np.ndarray | None = None,
) -> BinGrid:
    """Count filtered segments into an (nx, ny) grid, split by category.

    Axis ranges equal the filter's selected ranges for the two attributes; a
    segment contributes only if it passes all attribute filters.
    """
    if nx < 1 or ny < 1:
        raise ValueError(f"bin counts must be >= 1, got ({nx}, {ny})")
    ix_attr, iy_attr = attribute_index(attr_x), attribute_index(attr_y)
    attrs = dataset.attributes
    if mask is None:
        mask = filter_mask(dataset, filters)
    lo_x, hi_x = filters.ranges[ix_attr]
    lo_y, hi_y = filters.ranges[iy_attr]
    nx_eff = _effective_bins(lo_x, hi_x, nx)
    ny_eff = _effective_bins(lo_y, hi_y, ny)
    ncat = category_count(mode)

    ix = _bin_indices(dataset.attribute_column(ix_attr)[mask], lo_x, hi_x, nx_eff)
    iy = _bin_indices(dataset.attribute_column(iy_attr)[mask], lo_y, hi_y, ny_eff)
    cat = dataset.categories(mode)[mask].astype(np.int64)
    counts = np.bincount(
        (ix * ny_eff + iy) * ncat + cat, minlength=nx_eff * ny_eff * ncat
    ).reshape(nx_eff, ny_eff, ncat)
    return BinGrid(
        attr_x=attrs[ix_attr],
        attr_y=attrs[iy_attr],
        nx=nx_eff,
        ny=ny_eff,
        x_range=(lo_x, hi_x),
        y_range=(lo_y, hi_y),
        counts=counts,
        bin_totals=counts.sum(axis=2),
        mode=mode,
        category_totals=dataset.category_totals(mode),
    )


def compute_histogram_bins(
    dataset: Dataset,
    attr: AttributeId | int,
    n: int,
    filters: FilterState,
    mode: CategoryMode,
    mask: np.ndarray | None = None,
) -> HistGrid:
    """Count filtered segments into ``n`` bins of one attribute, by category."""
    if n < 1:
        raise ValueError(f"bin count must be >= 1, got {n}")
    index = attribute_index(attr)
    if mask is None:
        mask = filter_mask(dataset, filters)
    lo, hi = filters.ranges[index]
    n_eff = _effective_bins(lo, hi, n)
    ncat = category_count(mode)
    ix = _bin_indices(dataset.attribute_column(index)[mask], lo, hi, n_eff)
    cat = dataset.categories(mode)[mask].astype(np.int64)
    counts = np.bincount(ix * ncat + cat, minlength=n_eff * ncat).reshape(n_eff, ncat)
    return HistGrid(
        attr=dataset.attributes[index],
        n=n_eff,
        value_range=(lo, hi),
        counts=counts,
        mode=mode,
        category_totals=dataset.category_totals(mode),
    )


def alpha_local(count: int, bin_total: int) -> float:
    """Opacity as the category's share of its bin; empty bins give 0.0."""
    if count < 0 or count > bin_total:
        raise ValueError(f"count {count} outside [0, bin_total={bin_total}]")
    if bin_total == 0:
        return 0.0
    return count / bin_total


def alpha_global(count: int, category_total: int) -> float:
    """Opacity as log(1+count)/log(1+category_total); 0 for empty counts.

    The 1+x shift keeps single-element bins faintly visible (log 1 would
    erase them) while preserving the logarithmic shape.
    """
    if count < 0 or count > category_total:
        raise ValueError(f"count {count} outside [0, category_total={category_total}]")
    if count == 0 or category_total == 0:
        return 0.0
    return math.log1p(count) / math.log1p(category_total)


def alpha_array(
    counts: np.ndarray,
    bin_totals: np.ndarray,
    category_totals: tuple[int, ...],
    scaling: Scaling,
) -> np.ndarray:
    """Vectorized opacities for a counts tensor (..., ncat).

    Matches alpha_local / alpha_global element-wise exactly.
    """
    if scaling is Scaling.LOCAL:
        totals = np.asarray(bin_totals, dtype=np.float64)[..., None]
        with np.errstate(invalid="ignore", divide="ignore"):
            alphas = counts / totals
        return np.where(totals > 0, alphas, 0.0)
    # np.log1p (SIMD) can differ from libm's log1p in the last ulp; go through
    # math.log1p per distinct integer so array and scalar paths agree exactly.
    uniq, inverse = np.unique(counts, return_inverse=True)
    logs = np.array([math.log1p(int(u)) for u in uniq], dtype=np.float64)
    numer = logs[inverse].reshape(counts.shape)
    denom = np.array([math.log1p(int(t)) for t in category_totals], dtype=np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        alphas = numer / denom
    return np.where((counts > 0) & (denom > 0), alphas, 0.0)


@dataclass(frozen=True)
class ViewState:
    """Everything needed to reproduce one explorer view."""

    nx: int = 50
    ny: int = 50
    scaling: Scaling = Scaling.LOCAL
    mode: CategoryMode = CategoryMode.CODE
    filters: FilterState | None = None
    zoom: tuple[int, int] | None = None

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"bin counts must be >= 1, got ({self.nx}, {self.ny})")
        if self.zoom is not None:
            row, col = self.zoom
            if not (0 <= row < N_ATTRIBUTES and 0 <= col < N_ATTRIBUTES):
                raise ValueError(f"zoom cell out of range: {self.zoom}")

    def resolved_filters(self, dataset: Dataset) -> FilterState:
        return self.filters if self.filters is not None else FilterState.full(dataset)


def compute_splom_bins(
    dataset: Dataset, view: ViewState
) -> dict[tuple[int, int], BinGrid | HistGrid]:
    """All 64 cell grids for one view; the filter mask and per-attribute bin
    indices are computed once and shared.

    Cell (row, col) is a HistGrid of attribute ``row`` when row == col, else
    a BinGrid with x = attribute ``col`` and y = attribute ``row``.
    """
    filters = view.resolved_filters(dataset)
    mask = filter_mask(dataset, filters)
    ncat = category_count(view.mode)
    cat = dataset.categories(view.mode)[mask].astype(np.int64)
    attrs = dataset.attributes

    ix: list[np.ndarray] = []
    iy: list[np.ndarray] = []
    nx_eff: list[int] = []
    ny_eff: list[int] = []
    for a in range(N_ATTRIBUTES):
        lo, hi = filters.ranges[a]
        col = dataset.attribute_column(a)[mask]
        nx_eff.append(_effective_bins(lo, hi, view.nx))
        ny_eff.append(_effective_bins(lo, hi, view.ny))
        ix.append(_bin_indices(col, lo, hi, nx_eff[a]))
        iy.append(_bin_indices(col, lo, hi, ny_eff[a]))

    cells: dict[tuple[int, int], BinGrid | HistGrid] = {}
    for row in range(N_ATTRIBUTES):
        for col in range(N_ATTRIBUTES):
            if row == col:
                counts = np.bincount(
                    ix[col] * ncat + cat, minlength=nx_eff[col] * ncat
                ).reshape(nx_eff[col], ncat)
                cells[(row, col)] = HistGrid(
                    attr=attrs[col],
                    n=nx_eff[col],
                    value_range=filters.ranges[col],
                    counts=counts,
                    mode=view.mode,
                    category_totals=dataset.category_totals(view.mode),
                )
            else:
                counts = np.bincount(
                    (ix[col] * ny_eff[row] + iy[row]) * ncat + cat,
                    minlength=nx_eff[col] * ny_eff[row] * ncat,
                ).reshape(nx_eff[col], ny_eff[row], ncat)
                cells[(row, col)] = BinGrid(
                    attr_x=attrs[col],
                    attr_y=attrs[row],
                    nx=nx_eff[col],
                    ny=ny_eff[row],
                    x_range=filters.ranges[col],
                    y_range=filters.ranges[row],
                    counts=counts,
                    bin_totals=counts.sum(axis=2),
                    mode=view.mode,
                    category_totals=dataset.category_totals(view.mode),
                )
    return cells
