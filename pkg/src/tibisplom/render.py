"""SPLOM layout, tile drawing, and SVG/PNG export.

Rendering is a pure function of (dataset, view): repeated renders of the
same view produce byte-identical output. Cells hold scatterplots off the
diagonal and histograms on it; empty bins emit nothing so the white
background marks absent data.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from io import BytesIO
from typing import NamedTuple, Union
from xml.sax.saxutils import escape

import numpy as np
from PIL import Image, ImageDraw, ImageFont

from .binning import (
    BinGrid,
    HistGrid,
    Scaling,
    ViewState,
    alpha_array,
    compute_histogram_bins,
    compute_scatter_bins,
    compute_splom_bins,
)
from .model import N_ATTRIBUTES, CategoryMode, Dataset, category_count
from .style import WHITE, Color, tile_styles

EXPORT_FORMATS = ("svg", "png")

FRAME_COLOR: Color = (170, 170, 170)
TEXT_COLOR: Color = (40, 40, 40)


class Rect(NamedTuple):
    x: float
    y: float
    w: float
    h: float
    fill: Color


class Frame(NamedTuple):
    """Unfilled rectangle outline."""

    x: float
    y: float
    w: float
    h: float
    color: Color
    width: float


class Line(NamedTuple):
    x1: float
    y1: float
    x2: float
    y2: float
    color: Color
    width: float


class Label(NamedTuple):
    x: float
    y: float
    text: str
    size: float
    anchor: str  # 'start' | 'middle' | 'end'
    color: Color


Element = Union[Rect, Frame, Line, Label]


@dataclass(frozen=True)
class Document:
    """A finished drawing in its own coordinate space."""

    width: float
    height: float
    elements: tuple[Element, ...]


@dataclass(frozen=True)
class SplomLayout:
    """Uniform n x n cell grid with margins for descriptors and tick labels."""

    width: float
    height: float
    n_attrs: int = N_ATTRIBUTES
    margin_left: float = 96.0
    margin_top: float = 44.0
    margin_right: float = 14.0
    margin_bottom: float = 30.0
    gap: float = 4.0

    def __post_init__(self):
        pw, ph = self._plot_size()
        if pw <= 0 or ph <= 0:
            raise ValueError(
                f"canvas {self.width}x{self.height} too small for margins"
            )

    def _plot_size(self) -> tuple[float, float]:
        return (
            self.width - self.margin_left - self.margin_right,
            self.height - self.margin_top - self.margin_bottom,
        )

    @property
    def cell_size(self) -> tuple[float, float]:
        pw, ph = self._plot_size()
        n = self.n_attrs
        return ((pw - (n - 1) * self.gap) / n, (ph - (n - 1) * self.gap) / n)

    def cell_rect(self, row: int, col: int) -> tuple[float, float, float, float]:
        """Rectangle (x, y, w, h) of one cell; row 0 is the top row."""
        if not (0 <= row < self.n_attrs and 0 <= col < self.n_attrs):
            raise ValueError(f"cell ({row}, {col}) outside the {self.n_attrs}x{self.n_attrs} grid")
        cw, ch = self.cell_size
        return (
            self.margin_left + col * (cw + self.gap),
            self.margin_top + row * (ch + self.gap),
            cw,
            ch,
        )

    def plot_rect(self) -> tuple[float, float, float, float]:
        """The whole grid area as one rectangle (used for zoomed cells)."""
        pw, ph = self._plot_size()
        return (self.margin_left, self.margin_top, pw, ph)


def render_scatter_cell(
    grid: BinGrid,
    mode: CategoryMode,
    scaling: Scaling,
    cell_rect: tuple[float, float, float, float],
) -> list[Element]:
    """Tiles for every non-empty bin of one scatterplot cell.

    Each occupied bin spans the area between its interval borders; its 3x3
    tile grid holds one tile per present category, filled with the category
    color composited over white at the scaling's opacity. Absent categories
    and the center tile stay white (nothing is emitted).
    """
    x0, y0, w, h = cell_rect
    if w <= 0 or h <= 0:
        raise ValueError(f"cell rectangle must have positive area, got {cell_rect}")
    if mode is not grid.mode:
        raise ValueError(f"mode {mode} does not match grid mode {grid.mode}")

    ii, jj, cc = np.nonzero(grid.counts)
    if len(ii) == 0:
        return []
    alphas = alpha_array(grid.counts, grid.bin_totals, grid.category_totals, scaling)
    a = alphas[ii, jj, cc]

    styles = tile_styles(mode)
    positions = np.array([s.position for s in styles], dtype=np.int64)
    base = np.array([s.color for s in styles], dtype=np.float64)

    bw = w / grid.nx
    bh = h / grid.ny
    tw = bw / 3.0
    th = bh / 3.0
    # Data y grows upward; bin row j therefore hangs below y0 + h - j*bh.
    xs = (x0 + ii * bw + positions[cc, 1] * tw).tolist()
    ys = (y0 + h - (jj + 1) * bh + positions[cc, 0] * th).tolist()
    rgb = np.floor(
        (a[:, None] * base[cc]) + ((1.0 - a)[:, None] * 255.0) + 0.5
    ).astype(np.int64).tolist()
    return [
        Rect(x, y, tw, th, (r, g, b))
        for x, y, (r, g, b) in zip(xs, ys, rgb)
    ]


def render_histogram_cell(
    hist: HistGrid,
    mode: CategoryMode,
    scaling: Scaling,
    cell_rect: tuple[float, float, float, float],
) -> list[Element]:
    """Bars for one diagonal histogram cell.

    Each bin's span splits into ncat equal sub-columns in category order;
    bar height is the count normalized by the largest (bin, category) count,
    linearly under local scaling and via log(1+count) under global.
    """
    x0, y0, w, h = cell_rect
    if w <= 0 or h <= 0:
        raise ValueError(f"cell rectangle must have positive area, got {cell_rect}")
    if mode is not hist.mode:
        raise ValueError(f"mode {mode} does not match histogram mode {hist.mode}")

    values = (
        hist.counts.astype(np.float64)
        if scaling is Scaling.LOCAL
        else np.log1p(hist.counts.astype(np.float64))
    )
    vmax = float(values.max(initial=0.0))
    if vmax <= 0.0:
        return []

    ncat = category_count(mode)
    colors = [s.color for s in tile_styles(mode)]
    bw = w / hist.n
    sub = bw / ncat
    bb, cc = np.nonzero(hist.counts)
    heights = (values[bb, cc] / vmax * h).tolist()
    xs = (x0 + bb * bw + cc * sub).tolist()
    return [
        Rect(x, y0 + h - bar, sub, bar, colors[c])
        for x, bar, c in zip(xs, heights, cc.tolist())
    ]


def _fmt_value(v: float) -> str:
    return f"{v:.4g}"


def _axis_labels(
    rect: tuple[float, float, float, float],
    x_range: tuple[float, float] | None,
    y_range: tuple[float, float] | None,
    size: float,
) -> list[Element]:
    """Endpoint tick labels along a cell's bottom and left edges."""
    x, y, w, h = rect
    labels: list[Element] = []
    if x_range is not None:
        ty = y + h + size + 3.0
        labels.append(Label(x, ty, _fmt_value(x_range[0]), size, "start", TEXT_COLOR))
        labels.append(Label(x + w, ty, _fmt_value(x_range[1]), size, "end", TEXT_COLOR))
    if y_range is not None:
        tx = x - 4.0
        labels.append(Label(tx, y + h, _fmt_value(y_range[0]), size, "end", TEXT_COLOR))
        labels.append(Label(tx, y + size, _fmt_value(y_range[1]), size, "end", TEXT_COLOR))
    return labels


def render_splom(
    dataset: Dataset,
    view: ViewState,
    width: float = 1200.0,
    height: float = 1200.0,
) -> Document:
    """The full 8x8 matrix, or a single magnified cell when the view zooms.

    Cell (row, col) shows attribute ``col`` on x and attribute ``row`` on y;
    diagonal cells hold histograms. Attribute descriptors run along the top
    row and left column; tick labels mark the axis range endpoints.
    """
    layout = SplomLayout(width=float(width), height=float(height))
    attrs = dataset.attributes
    filters = view.resolved_filters(dataset)
    elements: list[Element] = []

    if view.zoom is not None:
        row, col = view.zoom
        rect = layout.plot_rect()
        if row == col:
            hist = compute_histogram_bins(dataset, col, view.nx, filters, view.mode)
            elements += render_histogram_cell(hist, view.mode, view.scaling, rect)
            title = attrs[col].descriptor
            y_range = None
        else:
            grid = compute_scatter_bins(
                dataset, col, row, view.nx, view.ny, filters, view.mode
            )
            elements += render_scatter_cell(grid, view.mode, view.scaling, rect)
            title = f"{attrs[row].descriptor} vs {attrs[col].descriptor}"
            y_range = filters.ranges[row]
        elements.append(Frame(*rect, FRAME_COLOR, 1.0))
        elements += _axis_labels(rect, filters.ranges[col], y_range, 10.0)
        elements.append(
            Label(rect[0] + rect[2] / 2.0, layout.margin_top - 12.0, title, 13.0, "middle", TEXT_COLOR)
        )
        return Document(float(width), float(height), tuple(elements))

    grids = compute_splom_bins(dataset, view)
    for row in range(N_ATTRIBUTES):
        for col in range(N_ATTRIBUTES):
            rect = layout.cell_rect(row, col)
            grid = grids[(row, col)]
            if row == col:
                elements += render_histogram_cell(grid, view.mode, view.scaling, rect)
            else:
                elements += render_scatter_cell(grid, view.mode, view.scaling, rect)
            elements.append(Frame(*rect, FRAME_COLOR, 1.0))

    for col in range(N_ATTRIBUTES):
        x, _, w, _ = layout.cell_rect(0, col)
        elements.append(
            Label(x + w / 2.0, layout.margin_top - 10.0, attrs[col].descriptor, 11.0, "middle", TEXT_COLOR)
        )
        bx, by, bw, bh = layout.cell_rect(N_ATTRIBUTES - 1, col)
        elements += _axis_labels((bx, by, bw, bh), filters.ranges[col], None, 8.0)
    for row in range(N_ATTRIBUTES):
        x, y, _, h = layout.cell_rect(row, 0)
        elements.append(
            Label(x - 6.0, y + h / 2.0, attrs[row].descriptor, 11.0, "end", TEXT_COLOR)
        )
        elements += _axis_labels((x, y, 0.0, h), None, filters.ranges[row], 8.0)

    return Document(float(width), float(height), tuple(elements))


# SVG serialization ----------------------------------------------------------


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def _hex(color: Color) -> str:
    return "#%02x%02x%02x" % color


def _element_svg(el: Element) -> str:
    if isinstance(el, Rect):
        return (
            f'<rect x="{_fmt(el.x)}" y="{_fmt(el.y)}" width="{_fmt(el.w)}" '
            f'height="{_fmt(el.h)}" fill="{_hex(el.fill)}"/>'
        )
    if isinstance(el, Frame):
        return (
            f'<rect x="{_fmt(el.x)}" y="{_fmt(el.y)}" width="{_fmt(el.w)}" '
            f'height="{_fmt(el.h)}" fill="none" stroke="{_hex(el.color)}" '
            f'stroke-width="{_fmt(el.width)}"/>'
        )
    if isinstance(el, Line):
        return (
            f'<line x1="{_fmt(el.x1)}" y1="{_fmt(el.y1)}" x2="{_fmt(el.x2)}" '
            f'y2="{_fmt(el.y2)}" stroke="{_hex(el.color)}" stroke-width="{_fmt(el.width)}"/>'
        )
    if isinstance(el, Label):
        return (
            f'<text x="{_fmt(el.x)}" y="{_fmt(el.y)}" font-size="{_fmt(el.size)}" '
            f'font-family="sans-serif" text-anchor="{el.anchor}" '
            f'fill="{_hex(el.color)}">{escape(el.text)}</text>'
        )
    raise TypeError(f"unknown element type: {type(el)!r}")


def document_to_svg(
    document: Document, width: float | None = None, height: float | None = None
) -> str:
    """Serialize as SVG 1.1; export dimensions default to the document's."""
    w = document.width if width is None else width
    h = document.height if height is None else height
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(w)}" height="{_fmt(h)}" '
        f'viewBox="0 0 {_fmt(document.width)} {_fmt(document.height)}">',
        f'<rect x="0" y="0" width="{_fmt(document.width)}" '
        f'height="{_fmt(document.height)}" fill="{_hex(WHITE)}"/>',
    ]
    parts.extend(_element_svg(el) for el in document.elements)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# PNG rasterization ----------------------------------------------------------


@functools.lru_cache(maxsize=32)
def _font(size: int) -> ImageFont.ImageFont:
    try:
        return ImageFont.load_default(size=max(size, 6))
    except TypeError:  # older Pillow without scalable default
        return ImageFont.load_default()


_ANCHOR = {"start": "ls", "middle": "ms", "end": "rs"}


def rasterize(document: Document, width: int, height: int) -> Image.Image:
    """Draw the document into an 8-bit RGB image of the given size.

    Rectangles snap to half-open pixel spans so adjacent tiles neither
    overlap nor leave seams; sub-pixel rectangles may vanish, as in any
    scan conversion.
    """
    width, height = int(width), int(height)
    if width <= 0 or height <= 0:
        raise ValueError(f"image size must be positive, got {width}x{height}")
    sx = width / document.width
    sy = height / document.height
    img = Image.new("RGB", (width, height), WHITE)
    draw = ImageDraw.Draw(img)
    for el in document.elements:
        if isinstance(el, Rect):
            x0, y0 = round(el.x * sx), round(el.y * sy)
            x1, y1 = round((el.x + el.w) * sx), round((el.y + el.h) * sy)
            if x1 > x0 and y1 > y0:
                draw.rectangle((x0, y0, x1 - 1, y1 - 1), fill=el.fill)
        elif isinstance(el, Frame):
            x0, y0 = round(el.x * sx), round(el.y * sy)
            x1, y1 = round((el.x + el.w) * sx), round((el.y + el.h) * sy)
            if x1 > x0 and y1 > y0:
                draw.rectangle(
                    (x0, y0, x1 - 1, y1 - 1),
                    outline=el.color,
                    width=max(1, round(el.width * min(sx, sy))),
                )
        elif isinstance(el, Line):
            draw.line(
                (el.x1 * sx, el.y1 * sy, el.x2 * sx, el.y2 * sy),
                fill=el.color,
                width=max(1, round(el.width * min(sx, sy))),
            )
        elif isinstance(el, Label):
            font = _font(round(el.size * sy))
            try:
                draw.text(
                    (el.x * sx, el.y * sy),
                    el.text,
                    fill=el.color,
                    font=font,
                    anchor=_ANCHOR[el.anchor],
                )
            except ValueError:  # bitmap fallback font: no anchor support
                draw.text((el.x * sx, el.y * sy), el.text, fill=el.color, font=font)
        else:
            raise TypeError(f"unknown element type: {type(el)!r}")
    return img


def export(document: Document, format: str, width: int, height: int) -> bytes:
    """Serialize the document as SVG or rasterize it as PNG."""
    if width <= 0 or height <= 0:
        raise ValueError(f"export size must be positive, got {width}x{height}")
    fmt = str(format).lower()
    if fmt == "svg":
        return document_to_svg(document, width, height).encode("utf-8")
    if fmt == "png":
        buf = BytesIO()
        rasterize(document, width, height).save(buf, format="PNG")
        return buf.getvalue()
    raise ValueError(
        f"unsupported format {format!r}; supported: {', '.join(EXPORT_FORMATS)}"
    )
