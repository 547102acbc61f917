"""Parsing, segmentation, coverage, and CpG density."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_tracks, oracle_coverage, oracle_cpg_count, oracle_segmentation
from tibisplom.model import CellType, ConsistencyError, Modification
from tibisplom.segdata import (
    Chromosome,
    GenomeBoundsError,
    Region,
    RegionParseError,
    TrackConfigError,
    UnknownChromosomeError,
    build_dataset,
    coverage_fraction,
    cpg_density,
    es_segmentation,
    parse_chrom_sizes,
    parse_cpg_track,
    parse_fasta,
    parse_region_file,
)

ESC = CellType.ESC
MEF = CellType.MEF
K4 = Modification.H3K4ME3
K27 = Modification.H3K27ME3


def reg(chrom, start, end, cell=ESC, mark=K4):
    return Region(chrom, start, end, cell, mark)


class TestParseRegionFile:
    def test_single_line(self):
        regions = parse_region_file("chr1\t100\t500", ESC, K4)
        assert regions == [Region("chr1", 100, 500, ESC, K4)]

    def test_empty_interval_rejected(self):
        with pytest.raises(RegionParseError, match="line 1"):
            parse_region_file("chr1\t500\t500", ESC, K4)

    def test_order_preserved(self):
        text = "chr2\t0\t300\nchr1\t100\t500\nchr1\t50\t250\n"
        regions = parse_region_file(text, MEF, K27)
        assert [(r.chrom, r.start, r.end) for r in regions] == [
            ("chr2", 0, 300),
            ("chr1", 100, 500),
            ("chr1", 50, 250),
        ]
        assert all(r.cell_type is MEF and r.modification is K27 for r in regions)

    def test_empty_file(self):
        assert parse_region_file("", ESC, K4) == []

    def test_comments_blanks_and_extra_fields(self):
        text = "# header\n\nchr1\t10\t300\textra\tcols\n"
        regions = parse_region_file(text, ESC, K4)
        assert len(regions) == 1

    @pytest.mark.parametrize(
        "line,fragment",
        [
            ("chr1\tten\t500", "non-integer"),
            ("chr1\t-5\t500", "negative"),
            ("chr1\t600\t500", "inverted"),
            ("chr1\t100", "at least 3"),
        ],
    )
    def test_malformed_lines(self, line, fragment):
        with pytest.raises(RegionParseError, match=fragment):
            parse_region_file("chr1\t0\t300\n" + line, ESC, K4)

    def test_error_names_line_number(self):
        with pytest.raises(RegionParseError, match="line 3"):
            parse_region_file("chr1\t0\t300\n# c\nchr1\tx\ty", ESC, K4)


class TestChromosome:
    def test_sequence_length_must_match(self):
        with pytest.raises(ValueError):
            Chromosome("chr1", 5, "ACGT")
        Chromosome("chr1", 4, "ACGT")

    def test_positive_length(self):
        with pytest.raises(ValueError):
            Chromosome("chr1", 0)


class TestGenomeInputs:
    def test_fasta_two_records(self):
        chroms = parse_fasta(">chr1 desc\nACGT\nacgt\n>chr2\nNNNN\n")
        assert [(c.name, c.length) for c in chroms] == [("chr1", 8), ("chr2", 4)]
        assert chroms[0].sequence == "ACGTACGT"

    def test_chrom_sizes(self):
        chroms = parse_chrom_sizes("chr1\t1000\nchr2\t2000\n")
        assert [(c.name, c.length, c.sequence) for c in chroms] == [
            ("chr1", 1000, None),
            ("chr2", 2000, None),
        ]

    def test_cpg_track(self):
        track = parse_cpg_track("chr1\t0\t500\t0.25\n")
        assert track[0] == ("chr1", 0, 500, 0.25)
        with pytest.raises(ValueError):
            parse_cpg_track("chr1\t0\t500\t1.5\n")


class TestEsSegmentation:
    def test_single_region_projects_three_segments(self):
        spans = es_segmentation([Chromosome("chr1", 2000)], [reg("chr1", 500, 1000)])
        assert spans == [("chr1", 0, 500), ("chr1", 500, 1000), ("chr1", 1000, 2000)]

    def test_short_candidate_eliminated(self):
        spans = es_segmentation(
            [Chromosome("chr1", 2000)],
            [reg("chr1", 100, 500, mark=K4), reg("chr1", 300, 700, mark=K27)],
        )
        # boundaries {0,100,300,500,700,2000}; (0,100) is below 200bp
        assert spans == [
            ("chr1", 100, 300),
            ("chr1", 300, 500),
            ("chr1", 500, 700),
            ("chr1", 700, 2000),
        ]

    def test_no_regions_yields_whole_chromosome(self):
        assert es_segmentation([Chromosome("chr1", 1000)], []) == [("chr1", 0, 1000)]

    def test_region_outside_bounds(self):
        with pytest.raises(GenomeBoundsError):
            es_segmentation([Chromosome("chr1", 400)], [reg("chr1", 100, 500)])

    def test_unknown_chromosome(self):
        with pytest.raises(UnknownChromosomeError):
            es_segmentation([Chromosome("chr1", 400)], [reg("chrX", 0, 300)])

    def test_mixed_cell_types_rejected(self):
        with pytest.raises(ValueError, match="cell types"):
            es_segmentation(
                [Chromosome("chr1", 2000)],
                [reg("chr1", 0, 300, ESC), reg("chr1", 400, 800, MEF)],
            )

    def test_matches_oracle_on_random_instances(self):
        rng = np.random.default_rng(42)
        for _ in range(60):
            n_chrom = rng.integers(1, 6)
            chroms = [
                Chromosome(f"chr{i}", int(rng.integers(500, 5000)))
                for i in range(n_chrom)
            ]
            regions = []
            for _ in range(rng.integers(0, 101)):
                c = chroms[rng.integers(0, n_chrom)]
                start = int(rng.integers(0, c.length - 1))
                end = int(rng.integers(start + 1, c.length + 1))
                regions.append(reg(c.name, start, end, mark=K4))
            spans = es_segmentation(chroms, regions)
            assert spans == oracle_segmentation(chroms, regions)
            # disjoint, min length, sorted
            assert all(e - s >= 200 for _, s, e in spans)
            by_chrom = {}
            for name, s, e in spans:
                by_chrom.setdefault(name, []).append((s, e))
            for pairs in by_chrom.values():
                assert pairs == sorted(pairs)
                assert all(a[1] <= b[0] for a, b in zip(pairs, pairs[1:]))


class TestCoverageFraction:
    def test_full_containment(self):
        assert coverage_fraction(("chr1", 100, 300), [reg("chr1", 100, 500)]) == 1.0

    def test_half_overlap(self):
        assert coverage_fraction(("chr1", 0, 400), [reg("chr1", 200, 400)]) == 0.5

    def test_union_of_overlapping_regions(self):
        regions = [reg("chr1", 0, 300), reg("chr1", 200, 600), reg("chr1", 900, 950)]
        assert coverage_fraction(("chr1", 0, 1000), regions) == 0.65

    def test_other_chromosomes_ignored(self):
        assert coverage_fraction(("chr1", 0, 100), [reg("chr2", 0, 100)]) == 0.0

    @given(
        start=st.integers(0, 500),
        length=st.integers(1, 500),
        raw=st.lists(
            st.tuples(st.integers(0, 1000), st.integers(1, 300)), max_size=10
        ),
    )
    @settings(max_examples=60, deadline=None)
    def test_matches_per_base_oracle(self, start, length, raw):
        segment = ("chr1", start, start + length)
        regions = [reg("chr1", s, s + l) for s, l in raw]
        assert coverage_fraction(segment, regions) == pytest.approx(
            oracle_coverage(segment, regions), abs=1e-12
        )


class TestCpgDensity:
    @pytest.mark.parametrize(
        "seq,expected",
        [("CGCGCG", 1.0), ("AAAAAA", 0.0), ("ACGTCGAT", 0.5)],
    )
    def test_examples(self, seq, expected):
        assert cpg_density(seq) == expected

    def test_short_sequence_is_zero(self):
        assert cpg_density("C") == 0.0

    @given(st.integers(1, 50))
    def test_pure_cg_repeats_saturate(self, k):
        assert cpg_density("CG" * k) == 1.0

    @given(st.text(alphabet="ACGTN", min_size=2, max_size=200))
    @settings(max_examples=100)
    def test_matches_scan_oracle(self, seq):
        assert cpg_density(seq) == oracle_cpg_count(seq) / (len(seq) // 2)


class TestBuildDataset:
    def test_one_region_construction(self):
        tracks = all_tracks([reg("chr1", 0, 500, ESC, K4)])
        ds = build_dataset([Chromosome("chr1", 1000)], tracks)
        assert len(ds) == 2
        first, second = ds.segment(0), ds.segment(1)
        assert first.coverage == (1.0, 0, 0, 0, 0, 0, 0, 0, 0)
        assert second.coverage == (0.0,) * 9
        assert list(ds.codes) == [4, 0]

    def test_partial_mef_coverage(self):
        tracks = all_tracks(
            [reg("chr1", 0, 500, ESC, K4), reg("chr1", 250, 750, MEF, K4)]
        )
        ds = build_dataset([Chromosome("chr1", 1000)], tracks)
        assert ds.segment(0).coverage[3] == 0.5
        assert ds.segment(1).coverage[3] == 0.5

    def test_empty_reference_tracks(self):
        ds = build_dataset([Chromosome("chr1", 1000)], all_tracks())
        assert len(ds) == 1
        assert ds.segment(0).coverage == (0.0,) * 9
        assert ds.codes[0] == 0

    def test_missing_track_rejected(self):
        tracks = all_tracks()
        del tracks[(MEF, K27)]
        with pytest.raises(TrackConfigError, match="MEF"):
            build_dataset([Chromosome("chr1", 1000)], tracks)

    def test_misfiled_region_rejected(self):
        tracks = all_tracks()
        tracks[(MEF, K27)].append(reg("chr1", 0, 300, MEF, K4))
        with pytest.raises(TrackConfigError, match="filed"):
            build_dataset([Chromosome("chr1", 1000)], tracks)

    def test_cpg_from_sequence(self):
        seq = "CG" * 200 + "AT" * 300
        tracks = all_tracks([reg("chr1", 0, 400, ESC, K4)])
        ds = build_dataset([Chromosome("chr1", 1000, seq)], tracks)
        assert ds.cpg_available
        assert ds.segment(0).cpg_density == 1.0
        assert ds.segment(1).cpg_density == 0.0

    def test_cpg_from_track(self):
        tracks = all_tracks([reg("chr1", 0, 400, ESC, K4)])
        cpg_track = parse_cpg_track("chr1\t0\t200\t0.5\nchr1\t200\t400\t0.1\n")
        ds = build_dataset([Chromosome("chr1", 1000)], tracks, cpg_track=cpg_track)
        assert ds.cpg_available
        assert ds.segment(0).cpg_density == pytest.approx(0.3)
        assert ds.segment(1).cpg_density == 0.0

    def test_cpg_unavailable_flagged(self):
        ds = build_dataset([Chromosome("chr1", 1000)], all_tracks())
        assert not ds.cpg_available
        assert float(ds.cpg.max(initial=0.0)) == 0.0

    def test_reference_coverage_binary_on_random_inputs(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            chroms = [Chromosome("chr1", 10_000), Chromosome("chr2", 8_000)]
            regions = []
            for cell in CellType:
                for mark in Modification:
                    for _ in range(rng.integers(0, 8)):
                        c = chroms[rng.integers(0, 2)]
                        s = int(rng.integers(0, c.length - 1))
                        e = int(rng.integers(s + 1, c.length + 1))
                        regions.append(Region(c.name, s, e, cell, mark))
            ds = build_dataset(chroms, all_tracks(regions))
            ref = ds.coverage[:, :3]
            assert np.all((ref == 0.0) | (ref == 1.0))
            # non-reference coverages agree with the scalar path
            for i in range(min(len(ds), 10)):
                seg = ds.segment(i)
                span = (seg.chrom, seg.start, seg.end)
                for ci, cell in enumerate(CellType):
                    for mi, mark in enumerate(Modification):
                        track = [
                            r
                            for r in regions
                            if r.cell_type is cell and r.modification is mark
                        ]
                        assert seg.coverage[ci * 3 + mi] == pytest.approx(
                            coverage_fraction(span, track), abs=1e-12
                        )

    def test_boundary_inside_retained_segment_never_exists(self):
        tracks = all_tracks(
            [reg("chr1", 300, 600, ESC, K4), reg("chr1", 900, 1400, ESC, K27)]
        )
        ds = build_dataset([Chromosome("chr1", 2000)], tracks)
        boundaries = {300, 600, 900, 1400}
        for s in ds.iter_segments():
            assert not any(s.start < b < s.end for b in boundaries)
