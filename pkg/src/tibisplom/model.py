"""Data model: cell types, marks, attributes, categories, and the segment table.

Ordering conventions used throughout the package:

- Coverage vectors hold nine fractions in cell-major order:
  (ESC, MEF, NPC) x (H3K4me3, H3K27me3, H3K9me3).
- The eight scatterplot attributes are the six non-reference coverages (same
  cell-major order), then CpG density, then segment length.
- The categorical code packs the three reference-cell coverages as a binary
  number with H3K4me3 as the most significant bit.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple, Sequence

import numpy as np

logger = logging.getLogger(__name__)

MIN_SEGMENT_LENGTH = 200

#: Upper bounds of the finite length categories; lengths above the last bound
#: fall into the open-ended fifth category.
LENGTH_CATEGORY_BOUNDS = (400, 600, 800, 1000)

N_ATTRIBUTES = 8


class CellType(str, Enum):
    ESC = "ESC"
    MEF = "MEF"
    NPC = "NPC"


class Modification(str, Enum):
    H3K4ME3 = "H3K4me3"
    H3K27ME3 = "H3K27me3"
    H3K9ME3 = "H3K9me3"


CELL_TYPES = (CellType.ESC, CellType.MEF, CellType.NPC)
MODIFICATIONS = (Modification.H3K4ME3, Modification.H3K27ME3, Modification.H3K9ME3)


class CategoryMode(str, Enum):
    """Which categorical attribute the tiles encode."""

    CODE = "code"
    LENGTH = "length"


def category_count(mode: CategoryMode) -> int:
    """Number of categories for a mode: 8 binary codes or 5 length classes."""
    return 8 if mode is CategoryMode.CODE else 5


def category_labels(mode: CategoryMode) -> tuple[str, ...]:
    """Human-readable labels, index-aligned with category numbers."""
    if mode is CategoryMode.CODE:
        labels = []
        for code in range(8):
            marks = [m.value for bit, m in zip((4, 2, 1), MODIFICATIONS) if code & bit]
            labels.append(f"{code:03b} " + (", ".join(marks) if marks else "none"))
        return tuple(labels)
    bounds = (MIN_SEGMENT_LENGTH,) + LENGTH_CATEGORY_BOUNDS
    labels = [f"{bounds[0]} ≤ l ≤ {bounds[1]}"]
    labels += [f"{bounds[i]} < l ≤ {bounds[i + 1]}" for i in range(1, 4)]
    labels.append(f"l > {bounds[4]}")
    return tuple(labels)


class Segment(NamedTuple):
    """One genome segment with its 11-dimensional description.

    ``coverage`` holds the nine per-(cell, mark) fractions in cell-major
    order; the reference cell's three entries are exactly 0.0 or 1.0.
    """

    chrom: str
    start: int
    end: int
    coverage: tuple[float, ...]
    cpg_density: float
    length: int


class AttributeId(NamedTuple):
    """One of the eight scatterplot attributes."""

    index: int
    descriptor: str


def attributes_for_reference(reference_cell: CellType) -> tuple[AttributeId, ...]:
    """Attribute registry for a given reference cell.

    The six coverage attributes are the non-reference cells' marks in
    cell-major order, followed by CpG density and length.
    """
    others = [c for c in CELL_TYPES if c is not reference_cell]
    descriptors = [f"{cell.value} {mark.value}" for cell in others for mark in MODIFICATIONS]
    descriptors += ["CpG density", "Length"]
    return tuple(AttributeId(i, d) for i, d in enumerate(descriptors))


#: Default registry (ESC reference): MEF marks, NPC marks, CpG density, length.
ATTRIBUTES = attributes_for_reference(CellType.ESC)


def attribute_index(attr: AttributeId | int) -> int:
    """Accept an AttributeId or a bare index; validate the range."""
    index = attr.index if isinstance(attr, AttributeId) else int(attr)
    if not 0 <= index < N_ATTRIBUTES:
        raise ValueError(f"attribute index out of range: {index}")
    return index


def _coverage_columns(reference_cell: CellType) -> tuple[int, ...]:
    """Coverage-vector columns backing attributes 0..5 (non-reference cells)."""
    return tuple(
        ci * 3 + mi
        for ci, cell in enumerate(CELL_TYPES)
        if cell is not reference_cell
        for mi in range(3)
    )


def _reference_columns(reference_cell: CellType) -> tuple[int, int, int]:
    ci = CELL_TYPES.index(reference_cell)
    return (ci * 3, ci * 3 + 1, ci * 3 + 2)


def esc_code(cov_h3k4me3: float, cov_h3k27me3: float, cov_h3k9me3: float) -> int:
    """Pack three binary reference coverages into a code 0..7 (H3K4me3 is the MSB)."""
    code = 0
    for bit, value in zip((4, 2, 1), (cov_h3k4me3, cov_h3k27me3, cov_h3k9me3)):
        if value == 1:
            code |= bit
        elif value != 0:
            raise ValueError(f"reference coverage must be exactly 0 or 1, got {value!r}")
    return code


def length_category(length: int) -> int:
    """Map a segment length to its category 0..4.

    Intervals: [200, 400], (400, 600], (600, 800], (800, 1000], (1000, inf).
    """
    if length < MIN_SEGMENT_LENGTH:
        raise ValueError(f"segment length below {MIN_SEGMENT_LENGTH}: {length}")
    for cat, bound in enumerate(LENGTH_CATEGORY_BOUNDS):
        if length <= bound:
            return cat
    return len(LENGTH_CATEGORY_BOUNDS)


def attribute_value(
    segment: Segment,
    attr: AttributeId | int,
    reference_cell: CellType = CellType.ESC,
) -> float:
    """Value of one scatterplot attribute for a segment."""
    index = attribute_index(attr)
    if index < 6:
        return segment.coverage[_coverage_columns(reference_cell)[index]]
    if index == 6:
        return segment.cpg_density
    return float(segment.length)


class ConsistencyError(RuntimeError):
    """An invariant that construction should have guaranteed does not hold."""


def _locked(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable column-oriented collection of segments.

    Columns are numpy arrays marked read-only; the dataset is safe to share
    across threads. ``coverage`` is (n, 9) in cell-major order; ``codes`` and
    ``length_cats`` are derived at construction time.
    """

    chrom_names: tuple[str, ...]
    chrom_ids: np.ndarray
    starts: np.ndarray
    ends: np.ndarray
    coverage: np.ndarray
    cpg: np.ndarray
    lengths: np.ndarray
    codes: np.ndarray
    length_cats: np.ndarray
    attribute_ranges: tuple[tuple[float, float], ...]
    code_totals: tuple[int, ...]
    length_totals: tuple[int, ...]
    cpg_available: bool
    reference_cell: CellType

    @classmethod
    def from_columns(
        cls,
        chroms: Sequence[str],
        starts: Sequence[int],
        ends: Sequence[int],
        coverage: np.ndarray,
        cpg: Sequence[float],
        cpg_available: bool = True,
        reference_cell: CellType = CellType.ESC,
    ) -> "Dataset":
        starts = np.asarray(starts, dtype=np.int64)
        ends = np.asarray(ends, dtype=np.int64)
        coverage = np.asarray(coverage, dtype=np.float64).reshape(len(starts), 9)
        cpg = np.asarray(cpg, dtype=np.float64)
        n = len(starts)
        if not (len(ends) == len(chroms) == len(cpg) == n):
            raise ValueError("column lengths differ")

        if n and np.any(starts >= ends):
            raise ValueError("segment start must be < end")
        if n and (np.any(coverage < 0.0) or np.any(coverage > 1.0)):
            raise ValueError("coverage values must lie in [0, 1]")
        if n and (np.any(cpg < 0.0) or np.any(cpg > 1.0)):
            raise ValueError("CpG density must lie in [0, 1]")

        lengths = ends - starts
        ref_cols = _reference_columns(reference_cell)
        ref_cov = coverage[:, ref_cols]
        if n and not np.all((ref_cov == 0.0) | (ref_cov == 1.0)):
            raise ConsistencyError(
                "reference-cell coverage is not exactly 0 or 1; "
                "segments do not respect reference-region boundaries"
            )
        codes = (
            ref_cov[:, 0].astype(np.int64) * 4
            + ref_cov[:, 1].astype(np.int64) * 2
            + ref_cov[:, 2].astype(np.int64)
        ).astype(np.uint8)
        length_cats = np.searchsorted(
            np.asarray(LENGTH_CATEGORY_BOUNDS, dtype=np.int64), lengths, side="left"
        ).astype(np.uint8)

        chrom_names = tuple(dict.fromkeys(chroms))
        name_to_id = {name: i for i, name in enumerate(chrom_names)}
        chrom_ids = np.fromiter(
            (name_to_id[c] for c in chroms), dtype=np.int32, count=n
        )

        cov_cols = _coverage_columns(reference_cell)
        ranges: list[tuple[float, float]] = []
        for i in range(N_ATTRIBUTES):
            if i < 6:
                col = coverage[:, cov_cols[i]]
            elif i == 6:
                col = cpg
            else:
                col = lengths
            if n:
                ranges.append((float(col.min()), float(col.max())))
            elif i < 7:
                ranges.append((0.0, 1.0))
            else:
                ranges.append((float(MIN_SEGMENT_LENGTH), float(MIN_SEGMENT_LENGTH)))

        code_totals = tuple(
            int(x) for x in np.bincount(codes, minlength=category_count(CategoryMode.CODE))
        )
        length_totals = tuple(
            int(x)
            for x in np.bincount(length_cats, minlength=category_count(CategoryMode.LENGTH))
        )

        return cls(
            chrom_names=chrom_names,
            chrom_ids=_locked(chrom_ids),
            starts=_locked(starts),
            ends=_locked(ends),
            coverage=_locked(coverage),
            cpg=_locked(cpg),
            lengths=_locked(lengths),
            codes=_locked(codes),
            length_cats=_locked(length_cats),
            attribute_ranges=tuple(ranges),
            code_totals=code_totals,
            length_totals=length_totals,
            cpg_available=cpg_available,
            reference_cell=reference_cell,
        )

    @classmethod
    def from_segments(
        cls,
        segments: Sequence[Segment],
        cpg_available: bool = True,
        reference_cell: CellType = CellType.ESC,
    ) -> "Dataset":
        return cls.from_columns(
            chroms=[s.chrom for s in segments],
            starts=[s.start for s in segments],
            ends=[s.end for s in segments],
            coverage=np.array([s.coverage for s in segments], dtype=np.float64).reshape(
                len(segments), 9
            ),
            cpg=[s.cpg_density for s in segments],
            cpg_available=cpg_available,
            reference_cell=reference_cell,
        )

    def __len__(self) -> int:
        return len(self.starts)

    @property
    def attributes(self) -> tuple[AttributeId, ...]:
        return attributes_for_reference(self.reference_cell)

    def attribute_column(self, attr: AttributeId | int) -> np.ndarray:
        """Read-only column of attribute values (lengths as float64)."""
        index = attribute_index(attr)
        if index < 6:
            return self.coverage[:, _coverage_columns(self.reference_cell)[index]]
        if index == 6:
            return self.cpg
        return self.lengths.astype(np.float64)

    def categories(self, mode: CategoryMode) -> np.ndarray:
        return self.codes if mode is CategoryMode.CODE else self.length_cats

    def category_totals(self, mode: CategoryMode) -> tuple[int, ...]:
        """Per-category segment counts over the whole dataset (filter-independent)."""
        return self.code_totals if mode is CategoryMode.CODE else self.length_totals

    def segment(self, i: int) -> Segment:
        return Segment(
            chrom=self.chrom_names[self.chrom_ids[i]],
            start=int(self.starts[i]),
            end=int(self.ends[i]),
            coverage=tuple(float(v) for v in self.coverage[i]),
            cpg_density=float(self.cpg[i]),
            length=int(self.lengths[i]),
        )

    def iter_segments(self) -> Iterator[Segment]:
        return (self.segment(i) for i in range(len(self)))


def normalize_for_filter(value: float, attr: AttributeId | int, dataset: Dataset) -> float:
    """Map an attribute value to the [0, 1] slider scale.

    Coverage and CpG values map identically; length maps logarithmically over
    [MIN_SEGMENT_LENGTH, max observed length]. Out-of-range values clamp with
    a warning.
    """
    index = attribute_index(attr)
    if index < 7:
        if not 0.0 <= value <= 1.0:
            logger.warning("value %r outside [0, 1] for attribute %d; clamping", value, index)
            return min(max(value, 0.0), 1.0)
        return float(value)
    min_len = float(MIN_SEGMENT_LENGTH)
    max_len = dataset.attribute_ranges[7][1]
    if value < min_len or value > max_len:
        logger.warning(
            "length %r outside [%g, %g]; clamping", value, min_len, max_len
        )
        value = min(max(value, min_len), max_len)
    if max_len <= min_len:
        return 0.0
    return math.log(value / min_len) / math.log(max_len / min_len)


# Dataset TSV persistence ----------------------------------------------------

_COVERAGE_HEADERS = tuple(
    f"cov_{cell.value.lower()}_{mark.value.lower()}"
    for cell in CELL_TYPES
    for mark in MODIFICATIONS
)

DATASET_COLUMNS = (
    ("chrom", "start", "end") + _COVERAGE_HEADERS + ("cpg_density", "length", "esc_code")
)


def write_dataset_tsv(dataset: Dataset, path: str) -> None:
    """Write the dataset as a TSV with a header row and '#' metadata lines.

    Floats are written with ``repr`` so a read back is value-exact.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# reference_cell={dataset.reference_cell.value}\n")
        fh.write(f"# cpg_available={int(dataset.cpg_available)}\n")
        fh.write("\t".join(DATASET_COLUMNS) + "\n")
        names = dataset.chrom_names
        for i in range(len(dataset)):
            cov = "\t".join(repr(float(v)) for v in dataset.coverage[i])
            fh.write(
                f"{names[dataset.chrom_ids[i]]}\t{dataset.starts[i]}\t{dataset.ends[i]}\t"
                f"{cov}\t{float(dataset.cpg[i])!r}\t{dataset.lengths[i]}\t{dataset.codes[i]}\n"
            )


def read_dataset_tsv(path: str) -> Dataset:
    """Read a dataset written by :func:`write_dataset_tsv`."""
    reference_cell = CellType.ESC
    cpg_available = True
    chroms: list[str] = []
    starts: list[int] = []
    ends: list[int] = []
    coverage: list[list[float]] = []
    cpg: list[float] = []
    codes: list[int] = []
    header_seen = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("reference_cell="):
                    reference_cell = CellType(body.split("=", 1)[1])
                elif body.startswith("cpg_available="):
                    cpg_available = bool(int(body.split("=", 1)[1]))
                continue
            if not header_seen:
                if tuple(line.split("\t")) != DATASET_COLUMNS:
                    raise ValueError(f"{path}:{lineno}: unexpected dataset header")
                header_seen = True
                continue
            fields = line.split("\t")
            if len(fields) != len(DATASET_COLUMNS):
                raise ValueError(
                    f"{path}:{lineno}: expected {len(DATASET_COLUMNS)} fields, got {len(fields)}"
                )
            try:
                chroms.append(fields[0])
                starts.append(int(fields[1]))
                ends.append(int(fields[2]))
                coverage.append([float(v) for v in fields[3:12]])
                cpg.append(float(fields[12]))
                codes.append(int(fields[14]))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    if not header_seen:
        raise ValueError(f"{path}: missing dataset header row")
    dataset = Dataset.from_columns(
        chroms=chroms,
        starts=starts,
        ends=ends,
        coverage=np.array(coverage, dtype=np.float64).reshape(len(starts), 9),
        cpg=cpg,
        cpg_available=cpg_available,
        reference_cell=reference_cell,
    )
    if len(dataset) and not np.array_equal(
        dataset.codes, np.asarray(codes, dtype=np.uint8)
    ):
        raise ValueError(f"{path}: esc_code column disagrees with reference coverages")
    return dataset
