"""Shared fixtures, synthetic data builders, and brute-force oracles.

The oracles here deliberately avoid the library's vectorized code paths:
binning is re-counted point by point, coverage by per-base membership,
segmentation from the explicit boundary multiset.
"""

import math

import numpy as np
import pytest

from tibisplom.model import CellType, Dataset, Modification

# --- acceptance reporting ----------------------------------------------------

_acceptance_results = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{outcome.upper():<7} {name}")


# --- synthetic datasets ------------------------------------------------------


def bimodal_fractions(rng, n, p_zero=0.4, p_one=0.4):
    """Coverage-like values concentrated at exactly 0 and 1."""
    u = rng.random(n)
    values = rng.random(n)
    values[u < p_zero] = 0.0
    values[u > 1.0 - p_one] = 1.0
    return values


def synthetic_dataset(n, seed=0, bathtub=False):
    """A dataset built directly from columns (no segmentation run).

    With ``bathtub=True`` the six non-reference coverages are concentrated
    at exactly 0 and 1.
    """
    rng = np.random.default_rng(seed)
    coverage = np.zeros((n, 9))
    coverage[:, :3] = rng.integers(0, 2, size=(n, 3)).astype(float)
    for k in range(3, 9):
        coverage[:, k] = bimodal_fractions(rng, n) if bathtub else rng.random(n)
    cpg = rng.beta(1.2, 30.0, size=n)
    lengths = 200 + rng.geometric(0.002, size=n)
    starts = np.arange(n, dtype=np.int64) * 100_000
    return Dataset.from_columns(
        chroms=["chr1"] * n,
        starts=starts,
        ends=starts + lengths,
        coverage=coverage,
        cpg=cpg,
    )


@pytest.fixture
def small_dataset():
    return synthetic_dataset(500, seed=7)


def all_tracks(regions=()):
    """A full nine-track mapping; listed regions are filed under their keys."""
    tracks = {(c, m): [] for c in CellType for m in Modification}
    for r in regions:
        tracks[(r.cell_type, r.modification)].append(r)
    return tracks


# --- oracles -----------------------------------------------------------------


def oracle_bin_index(value, lo, hi, n):
    """Scalar bin placement straight from the definition."""
    if value == hi:
        return n - 1
    return min(int(math.floor(n * (value - lo) / (hi - lo))), n - 1)


def oracle_scatter_counts(xs, ys, cats, x_range, y_range, nx, ny, ncat):
    """Per-point double loop into a plain nested list tensor.

    Points outside either range are skipped (the caller's filter contract).
    """
    counts = [[[0] * ncat for _ in range(ny)] for _ in range(nx)]
    for x, y, c in zip(xs, ys, cats):
        if not (x_range[0] <= x <= x_range[1] and y_range[0] <= y <= y_range[1]):
            continue
        ix = 0 if x_range[0] == x_range[1] else oracle_bin_index(x, *x_range, nx)
        iy = 0 if y_range[0] == y_range[1] else oracle_bin_index(y, *y_range, ny)
        counts[ix][iy][int(c)] += 1
    return counts


def oracle_hist_counts(xs, cats, value_range, n, ncat):
    counts = [[0] * ncat for _ in range(n)]
    for x, c in zip(xs, cats):
        if not value_range[0] <= x <= value_range[1]:
            continue
        ix = 0 if value_range[0] == value_range[1] else oracle_bin_index(x, *value_range, n)
        counts[ix][int(c)] += 1
    return counts


def oracle_filter_pass(dataset, filters, i):
    """Check one segment against every attribute range, value by value."""
    for a in range(8):
        lo, hi = filters.ranges[a]
        v = float(dataset.attribute_column(a)[i])
        if not lo <= v <= hi:
            return False
    return True


def oracle_coverage(segment, regions):
    """Per-base membership scan."""
    chrom, start, end = segment
    covered = 0
    for pos in range(start, end):
        if any(r.chrom == chrom and r.start <= pos < r.end for r in regions):
            covered += 1
    return covered / (end - start)


def oracle_segmentation(chromosomes, regions, min_len=200):
    """Boundary projection from the explicit boundary multiset."""
    out = []
    for chrom in sorted(chromosomes, key=lambda c: c.name):
        bounds = [0, chrom.length]
        for r in regions:
            if r.chrom == chrom.name:
                bounds.append(r.start)
                bounds.append(r.end)
        bounds = sorted(set(bounds))
        for a, b in zip(bounds, bounds[1:]):
            if b - a >= min_len:
                out.append((chrom.name, a, b))
    return out


def oracle_cpg_count(sequence):
    """Left-to-right non-overlapping scan for CG pairs."""
    count = 0
    i = 0
    while i < len(sequence) - 1:
        if sequence[i] == "C" and sequence[i + 1] == "G":
            count += 1
            i += 2
        else:
            i += 1
    return count
