"""Command-line entry points: ``segment``, ``render``, and ``serve``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .binning import ViewState
from .model import (
    CELL_TYPES,
    MODIFICATIONS,
    CellType,
    Modification,
    read_dataset_tsv,
    write_dataset_tsv,
)
from .query import build_filters, parse_cell, parse_mode, parse_scaling
from .render import export, render_splom
from .segdata import (
    Chromosome,
    CpgInterval,
    Region,
    TrackConfigError,
    build_dataset,
    parse_chrom_sizes,
    parse_cpg_track,
    parse_fasta,
    parse_region_file,
)

DEFAULT_PORT = 8000
PORT_ENV_VAR = "TIBISPLOM_PORT"


class UsageError(Exception):
    """Bad flag combinations or malformed flag values."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="tibisplom", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    seg = sub.add_parser("segment", help="segment a genome and write a dataset TSV")
    seg.add_argument("--manifest", required=True, help="JSON manifest of input files")
    seg.add_argument("--out", required=True, help="output dataset TSV path")
    seg.set_defaults(func=cmd_segment)

    ren = sub.add_parser("render", help="render a dataset to SVG or PNG")
    ren.add_argument("--dataset", required=True, help="dataset TSV path")
    ren.add_argument("--out", required=True, help="output file (.svg or .png)")
    ren.add_argument("--bins-x", type=int, default=50)
    ren.add_argument("--bins-y", type=int, default=50)
    ren.add_argument("--scaling", default="local", help="local or global")
    ren.add_argument("--mode", default="code", help="code or length")
    ren.add_argument(
        "--filter",
        action="append",
        default=[],
        metavar="ATTR:LO:HI",
        help="narrow one attribute's range (repeatable)",
    )
    ren.add_argument("--width", type=int, default=1200)
    ren.add_argument("--height", type=int, default=1200)
    ren.add_argument("--cell", metavar="ROW,COL", help="render one magnified cell")
    ren.set_defaults(func=cmd_render)

    srv = sub.add_parser("serve", help="serve the HTTP API over a dataset")
    srv.add_argument("--dataset", required=True, help="dataset TSV path")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument(
        "--port",
        type=int,
        default=None,
        help=f"listen port (default: ${PORT_ENV_VAR} or {DEFAULT_PORT})",
    )
    srv.add_argument("--ui-dir", default=None, help="static directory for the web UI")
    srv.set_defaults(func=cmd_serve)

    return parser


_TRACK_KEYS = tuple(
    f"{cell.value}:{mark.value}" for cell in CELL_TYPES for mark in MODIFICATIONS
)


def load_manifest(
    path: str,
) -> tuple[
    list[Chromosome],
    dict[tuple[CellType, Modification], list[Region]],
    CellType,
    list[CpgInterval] | None,
]:
    """Load the JSON manifest naming the nine track files and the genome.

    Keys: ``tracks`` (mapping "CELL:MARK" -> region TSV path, all nine
    required), ``genome_fasta`` or ``chrom_sizes``, optional ``cpg_track``,
    optional ``reference_cell`` (default ESC). Paths resolve relative to the
    manifest's directory.
    """
    base = Path(path).parent
    with open(path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)

    def resolve(name: str) -> Path:
        p = Path(manifest[name])
        return p if p.is_absolute() else base / p

    if "genome_fasta" in manifest:
        chromosomes = parse_fasta(resolve("genome_fasta").read_text())
    elif "chrom_sizes" in manifest:
        chromosomes = parse_chrom_sizes(resolve("chrom_sizes").read_text())
    else:
        raise TrackConfigError("manifest needs 'genome_fasta' or 'chrom_sizes'")

    cpg_track = None
    if "cpg_track" in manifest:
        cpg_track = parse_cpg_track(resolve("cpg_track").read_text())

    reference_cell = CellType(manifest.get("reference_cell", "ESC"))

    raw_tracks = manifest.get("tracks", {})
    missing = [k for k in _TRACK_KEYS if k not in raw_tracks]
    if missing:
        raise TrackConfigError(f"manifest missing tracks: {', '.join(missing)}")
    tracks: dict[tuple[CellType, Modification], list[Region]] = {}
    for key in _TRACK_KEYS:
        cell_token, mark_token = key.split(":")
        cell, mark = CellType(cell_token), Modification(mark_token)
        p = Path(raw_tracks[key])
        if not p.is_absolute():
            p = base / p
        tracks[(cell, mark)] = parse_region_file(p.read_text(), cell, mark)

    return chromosomes, tracks, reference_cell, cpg_track


def cmd_segment(args) -> int:
    chromosomes, tracks, reference_cell, cpg_track = load_manifest(args.manifest)
    dataset = build_dataset(
        chromosomes, tracks, reference_cell=reference_cell, cpg_track=cpg_track
    )
    write_dataset_tsv(dataset, args.out)
    print(f"{len(dataset)} segments")
    return 0


def cmd_render(args) -> int:
    suffix = Path(args.out).suffix.lower()
    if suffix not in (".svg", ".png"):
        raise UsageError(f"output must end in .svg or .png, got {args.out!r}")
    if args.width <= 0 or args.height <= 0:
        raise UsageError("width and height must be positive")

    dataset = read_dataset_tsv(args.dataset)
    try:
        view = ViewState(
            nx=args.bins_x,
            ny=args.bins_y,
            scaling=parse_scaling(args.scaling),
            mode=parse_mode(args.mode),
            filters=build_filters(dataset, args.filter),
            zoom=parse_cell(args.cell) if args.cell else None,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    document = render_splom(dataset, view, float(args.width), float(args.height))
    data = export(document, suffix[1:], args.width, args.height)
    Path(args.out).write_bytes(data)
    print(f"wrote {args.out} ({len(data)} bytes)")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    port = args.port
    if port is None:
        port = int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT))
    dataset = read_dataset_tsv(args.dataset)
    app = create_app(dataset, ui_dir=args.ui_dir)
    print(f"serving {len(dataset)} segments on http://{args.host}:{port}")
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
