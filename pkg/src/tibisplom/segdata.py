"""Input parsing and genome segmentation.

Intervals follow the BED convention: 0-based, half-open ``[start, end)``.
Segmentation projects the boundaries of every reference-cell region
(regardless of mark) onto each chromosome, adds the chromosome ends, and
keeps the resulting stretches of at least ``min_len`` bases. Dropped
stretches leave gaps; they are never merged into neighbours.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .model import (
    CELL_TYPES,
    MIN_SEGMENT_LENGTH,
    MODIFICATIONS,
    CellType,
    ConsistencyError,
    Dataset,
    Modification,
)

logger = logging.getLogger(__name__)


class RegionParseError(ValueError):
    """A region line could not be parsed; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class GenomeBoundsError(ValueError):
    """A region lies outside its chromosome."""


class UnknownChromosomeError(ValueError):
    """A region names a chromosome that was not declared."""


class TrackConfigError(ValueError):
    """The nine (cell type, mark) tracks are not all present."""


class Region(NamedTuple):
    """A called enrichment region for one (cell type, mark) pair."""

    chrom: str
    start: int
    end: int
    cell_type: CellType
    modification: Modification


@dataclass(frozen=True)
class Chromosome:
    """A chromosome, optionally with its nucleotide sequence."""

    name: str
    length: int
    sequence: str | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("chromosome name must be non-empty")
        if self.length <= 0:
            raise ValueError(f"chromosome length must be positive: {self.length}")
        if self.sequence is not None and len(self.sequence) != self.length:
            raise ValueError(
                f"sequence length {len(self.sequence)} != declared length {self.length}"
            )


def parse_region_file(
    text: str, cell_type: CellType, modification: Modification
) -> list[Region]:
    """Parse TSV region lines (``chrom<TAB>start<TAB>end``; '#' comments).

    Extra columns are ignored. Raises :class:`RegionParseError` naming the
    offending line for non-integer coordinates, start >= end, or missing
    fields. An empty file yields an empty list.
    """
    regions: list[Region] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 3:
            raise RegionParseError(lineno, f"expected at least 3 fields, got {len(fields)}")
        chrom = fields[0].strip()
        if not chrom:
            raise RegionParseError(lineno, "empty chromosome name")
        try:
            start = int(fields[1])
            end = int(fields[2])
        except ValueError:
            raise RegionParseError(
                lineno, f"non-integer coordinates: {fields[1]!r}, {fields[2]!r}"
            ) from None
        if start < 0:
            raise RegionParseError(lineno, f"negative start: {start}")
        if start >= end:
            raise RegionParseError(lineno, f"empty or inverted interval: [{start}, {end})")
        regions.append(Region(chrom, start, end, cell_type, modification))
    return regions


def parse_fasta(text: str) -> list[Chromosome]:
    """Parse FASTA records into chromosomes; sequences are upper-cased."""
    chromosomes: list[Chromosome] = []
    name: str | None = None
    parts: list[str] = []

    def flush():
        if name is None:
            return
        seq = "".join(parts).upper()
        if not seq:
            raise ValueError(f"FASTA record {name!r} has no sequence")
        chromosomes.append(Chromosome(name, len(seq), seq))

    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            flush()
            name = line[1:].split()[0] if line[1:].split() else ""
            parts = []
        else:
            if name is None:
                raise ValueError("FASTA sequence data before first header")
            parts.append(line)
    flush()
    return chromosomes


def parse_chrom_sizes(text: str) -> list[Chromosome]:
    """Parse ``name<TAB>length`` lines into sequence-less chromosomes."""
    chromosomes = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 2:
            raise ValueError(f"line {lineno}: expected name<TAB>length")
        chromosomes.append(Chromosome(fields[0], int(fields[1])))
    return chromosomes


class CpgInterval(NamedTuple):
    """Piecewise-constant CpG density over one interval."""

    chrom: str
    start: int
    end: int
    density: float


def parse_cpg_track(text: str) -> list[CpgInterval]:
    """Parse ``chrom<TAB>start<TAB>end<TAB>density`` lines."""
    intervals = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 4:
            raise ValueError(f"line {lineno}: expected chrom, start, end, density")
        start, end, density = int(fields[1]), int(fields[2]), float(fields[3])
        if start >= end:
            raise ValueError(f"line {lineno}: empty interval [{start}, {end})")
        if not 0.0 <= density <= 1.0:
            raise ValueError(f"line {lineno}: density {density} outside [0, 1]")
        intervals.append(CpgInterval(fields[0], start, end, density))
    return intervals


def _check_bounds(regions: Iterable[Region], lengths: Mapping[str, int]) -> None:
    for r in regions:
        if r.chrom not in lengths:
            raise UnknownChromosomeError(f"region on undeclared chromosome {r.chrom!r}")
        if r.end > lengths[r.chrom]:
            raise GenomeBoundsError(
                f"region [{r.start}, {r.end}) exceeds {r.chrom} length {lengths[r.chrom]}"
            )


def es_segmentation(
    chromosomes: Sequence[Chromosome],
    reference_regions: Sequence[Region],
    min_len: int = MIN_SEGMENT_LENGTH,
) -> list[tuple[str, int, int]]:
    """Project reference-region boundaries and keep stretches >= ``min_len``.

    Per chromosome the boundary set is {0, length} plus every region start
    and end; consecutive boundaries form candidate segments and candidates
    shorter than ``min_len`` are dropped. Returns (chrom, start, end) tuples
    sorted by (chrom, start), pairwise disjoint.
    """
    lengths = {c.name: c.length for c in chromosomes}
    if len(lengths) != len(chromosomes):
        raise ValueError("duplicate chromosome names")
    _check_bounds(reference_regions, lengths)
    cells = {r.cell_type for r in reference_regions}
    if len(cells) > 1:
        raise ValueError(f"reference regions span multiple cell types: {sorted(c.value for c in cells)}")

    by_chrom: dict[str, list[int]] = {name: [] for name in lengths}
    for r in reference_regions:
        by_chrom[r.chrom].append(r.start)
        by_chrom[r.chrom].append(r.end)

    segments: list[tuple[str, int, int]] = []
    for name in sorted(lengths):
        bounds = np.unique(
            np.array([0, lengths[name]] + by_chrom[name], dtype=np.int64)
        )
        starts, ends = bounds[:-1], bounds[1:]
        keep = (ends - starts) >= min_len
        segments.extend(
            (name, int(s), int(e)) for s, e in zip(starts[keep], ends[keep])
        )
    return segments


def _merge_intervals(regions: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    ordered = sorted(regions)
    merged: list[tuple[int, int]] = []
    for start, end in ordered:
        if merged and start <= merged[-1][1]:
            if end > merged[-1][1]:
                merged[-1] = (merged[-1][0], end)
        else:
            merged.append((start, end))
    return merged


def coverage_fraction(
    segment: tuple[str, int, int], track_regions: Sequence[Region]
) -> float:
    """Fraction of the segment's bases covered by the union of track regions.

    Regions on other chromosomes are ignored; overlapping regions are
    unioned before counting.
    """
    chrom, start, end = segment
    if start >= end:
        raise ValueError(f"empty segment [{start}, {end})")
    covered = 0
    for s, e in _merge_intervals(
        (r.start, r.end) for r in track_regions if r.chrom == chrom
    ):
        covered += max(0, min(e, end) - max(s, start))
    return covered / (end - start)


def cpg_density(sequence: str) -> float:
    """Non-overlapping count of "CG" dinucleotides over floor(len/2).

    Scanning is left to right; any character other than C followed by G
    (including N) never contributes. Sequences shorter than 2 yield 0.0.
    """
    if len(sequence) < 2:
        logger.warning("CpG density of sequence shorter than 2 bases; returning 0.0")
        return 0.0
    return sequence.count("CG") / (len(sequence) // 2)


class _PrefixCoverage:
    """Prefix sums over merged intervals for O(log m) covered-base queries."""

    def __init__(self, intervals: Sequence[tuple[int, int]], weights=None):
        merged = intervals if weights is not None else _merge_intervals(intervals)
        self.starts = np.array([s for s, _ in merged], dtype=np.int64)
        self.ends = np.array([e for _, e in merged], dtype=np.int64)
        sizes = (self.ends - self.starts).astype(np.float64)
        w = np.ones_like(sizes) if weights is None else np.asarray(weights, dtype=np.float64)
        self.weights = w
        self.cum = np.concatenate([[0.0], np.cumsum(sizes * w)])

    def up_to(self, positions: np.ndarray) -> np.ndarray:
        """Weighted covered bases in [0, x) for each x."""
        if len(self.starts) == 0:
            return np.zeros(len(positions), dtype=np.float64)
        idx = np.searchsorted(self.starts, positions, side="right")
        inner = np.maximum(idx - 1, 0)
        partial = np.clip(
            np.minimum(positions, self.ends[inner]) - self.starts[inner],
            0,
            None,
        ) * self.weights[inner]
        return np.where(idx > 0, self.cum[inner] + partial, 0.0)

    def between(self, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
        return self.up_to(ends) - self.up_to(starts)


def _track_coverage_column(
    seg_by_chrom: dict[str, tuple[np.ndarray, np.ndarray]],
    regions: Sequence[Region],
    out: np.ndarray,
    offsets: dict[str, int],
) -> None:
    per_chrom: dict[str, list[tuple[int, int]]] = {}
    for r in regions:
        per_chrom.setdefault(r.chrom, []).append((r.start, r.end))
    for chrom, (starts, ends) in seg_by_chrom.items():
        if chrom not in per_chrom:
            continue
        prefix = _PrefixCoverage(per_chrom[chrom])
        covered = prefix.between(starts, ends)
        o = offsets[chrom]
        out[o : o + len(starts)] = covered / (ends - starts)


def _sequence_cpg(chromosome: Chromosome, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Per-segment CpG density computed from a prefix count of CG pairs."""
    buf = np.frombuffer(chromosome.sequence.encode("ascii"), dtype=np.uint8)
    pair = (buf[:-1] == ord("C")) & (buf[1:] == ord("G"))
    prefix = np.concatenate([[0], np.cumsum(pair, dtype=np.int64)])
    counts = prefix[ends - 1] - prefix[starts]
    halves = (ends - starts) // 2
    return np.where(halves > 0, counts / np.maximum(halves, 1), 0.0)


def _track_cpg(
    intervals: Sequence[CpgInterval], starts: np.ndarray, ends: np.ndarray, chrom: str
) -> np.ndarray:
    """Length-weighted mean density over the segment; uncovered bases count 0."""
    rows = sorted((iv.start, iv.end, iv.density) for iv in intervals if iv.chrom == chrom)
    for (s0, e0, _), (s1, _, _) in zip(rows, rows[1:]):
        if s1 < e0:
            raise ValueError(f"overlapping CpG track intervals on {chrom}")
    prefix = _PrefixCoverage(
        [(s, e) for s, e, _ in rows], weights=[d for _, _, d in rows]
    )
    return prefix.between(starts, ends) / (ends - starts)


def build_dataset(
    chromosomes: Sequence[Chromosome],
    tracks: Mapping[tuple[CellType, Modification], Sequence[Region]],
    reference_cell: CellType = CellType.ESC,
    min_len: int = MIN_SEGMENT_LENGTH,
    cpg_track: Sequence[CpgInterval] | None = None,
) -> Dataset:
    """Segment the genome and compute the full 11-dimensional description.

    All nine (cell type, mark) tracks must be present (empty lists are
    fine). CpG density comes from chromosome sequences when available, else
    from ``cpg_track``; otherwise it is 0.0 and the dataset is flagged.
    """
    for cell in CELL_TYPES:
        for mark in MODIFICATIONS:
            if (cell, mark) not in tracks:
                raise TrackConfigError(f"missing track ({cell.value}, {mark.value})")
    lengths = {c.name: c.length for c in chromosomes}
    for (cell, mark), regions in tracks.items():
        for r in regions:
            if r.cell_type is not cell or r.modification is not mark:
                raise TrackConfigError(
                    f"region {r} filed under track ({cell.value}, {mark.value})"
                )
        _check_bounds(regions, lengths)

    reference_regions = [
        r for mark in MODIFICATIONS for r in tracks[(reference_cell, mark)]
    ]
    spans = es_segmentation(chromosomes, reference_regions, min_len=min_len)

    n = len(spans)
    chroms = [s[0] for s in spans]
    starts = np.array([s[1] for s in spans], dtype=np.int64)
    ends = np.array([s[2] for s in spans], dtype=np.int64)

    # Spans arrive sorted by (chrom, start): per-chromosome slices are contiguous.
    seg_by_chrom: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    offsets: dict[str, int] = {}
    i = 0
    while i < n:
        j = i
        while j < n and chroms[j] == chroms[i]:
            j += 1
        seg_by_chrom[chroms[i]] = (starts[i:j], ends[i:j])
        offsets[chroms[i]] = i
        i = j

    coverage = np.zeros((n, 9), dtype=np.float64)
    for ci, cell in enumerate(CELL_TYPES):
        for mi, mark in enumerate(MODIFICATIONS):
            _track_coverage_column(
                seg_by_chrom, tracks[(cell, mark)], coverage[:, ci * 3 + mi], offsets
            )

    by_name = {c.name: c for c in chromosomes}
    have_sequences = all(c.sequence is not None for c in chromosomes)
    cpg = np.zeros(n, dtype=np.float64)
    cpg_available = True
    if have_sequences and chromosomes:
        for chrom, (s, e) in seg_by_chrom.items():
            o = offsets[chrom]
            cpg[o : o + len(s)] = _sequence_cpg(by_name[chrom], s, e)
    elif cpg_track is not None:
        for chrom, (s, e) in seg_by_chrom.items():
            o = offsets[chrom]
            cpg[o : o + len(s)] = _track_cpg(cpg_track, s, e, chrom)
    else:
        cpg_available = False
        logger.info("no genome sequence or CpG track supplied; CpG density set to 0.0")

    dataset = Dataset.from_columns(
        chroms=chroms,
        starts=starts,
        ends=ends,
        coverage=coverage,
        cpg=np.clip(cpg, 0.0, 1.0),
        cpg_available=cpg_available,
        reference_cell=reference_cell,
    )
    return dataset
