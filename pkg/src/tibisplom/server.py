"""HTTP JSON API over one immutable dataset.

The dataset is shared read-only across requests; every bin query is
recomputed from it, so identical queries return identical payloads.
Session storage holds UI conveniences only and is guarded by a lock.
"""

from __future__ import annotations

import threading

import numpy as np
from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .binning import (
    FilterState,
    Scaling,
    ViewState,
    alpha_array,
    compute_histogram_bins,
    compute_scatter_bins,
)
from .model import (
    MIN_SEGMENT_LENGTH,
    N_ATTRIBUTES,
    CategoryMode,
    Dataset,
    category_count,
    category_labels,
)
from .query import build_filters, parse_cell, parse_mode, parse_scaling
from .render import export, render_splom
from .style import tile_styles

MAX_BINS = 1000

_MEDIA_TYPES = {"svg": "image/svg+xml", "png": "image/png"}


def _bad_request(code: str, message: str) -> HTTPException:
    return HTTPException(status_code=400, detail={"error": code, "message": message})


class SessionView(BaseModel):
    """Client view state persisted per session token."""

    nx: int = 50
    ny: int = 50
    scaling: str = "local"
    mode: str = "code"
    filters: list[tuple[float, float]] | None = None
    zoom: tuple[int, int] | None = None


def _attr_payload(dataset: Dataset, index: int) -> dict:
    attr = dataset.attributes[index]
    kind = "coverage" if index < 6 else ("cpg" if index == 6 else "length")
    lo, hi = FilterState.full(dataset).ranges[index]
    return {
        "index": attr.index,
        "descriptor": attr.descriptor,
        "kind": kind,
        "filter_domain": [lo, hi],
        "data_range": list(dataset.attribute_ranges[index]),
    }


def _mode_payload(dataset: Dataset, mode: CategoryMode) -> dict:
    styles = tile_styles(mode)
    return {
        "labels": list(category_labels(mode)),
        "colors": [list(s.color) for s in styles],
        "positions": [list(s.position) for s in styles],
        "totals": list(dataset.category_totals(mode)),
    }


def create_app(dataset: Dataset, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="tibisplom")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    sessions: dict[str, SessionView] = {}
    sessions_lock = threading.Lock()

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "invalid_parameter", "message": str(exc.errors()[:3])},
        )

    def _parse_view(
        nx: int,
        ny: int,
        scaling: str,
        mode: str,
        filters: list[str],
        zoom: tuple[int, int] | None = None,
    ) -> ViewState:
        if not (1 <= nx <= MAX_BINS and 1 <= ny <= MAX_BINS):
            raise _bad_request("bad_bins", f"bin counts must be in [1, {MAX_BINS}]")
        try:
            return ViewState(
                nx=nx,
                ny=ny,
                scaling=parse_scaling(scaling),
                mode=parse_mode(mode),
                filters=build_filters(dataset, filters),
                zoom=zoom,
            )
        except ValueError as exc:
            raise _bad_request("bad_parameter", str(exc)) from exc

    def _check_cell(row: int, col: int) -> None:
        if not (0 <= row < N_ATTRIBUTES and 0 <= col < N_ATTRIBUTES):
            raise _bad_request("bad_cell", f"cell ({row}, {col}) outside the 8x8 grid")

    @app.get("/api/meta")
    def api_meta() -> dict:
        return {
            "segment_count": len(dataset),
            "cpg_available": dataset.cpg_available,
            "reference_cell": dataset.reference_cell.value,
            "min_segment_length": MIN_SEGMENT_LENGTH,
            "attributes": [_attr_payload(dataset, i) for i in range(N_ATTRIBUTES)],
            "category_modes": {
                mode.value: _mode_payload(dataset, mode) for mode in CategoryMode
            },
        }

    @app.get("/api/cell")
    def api_cell(
        row: int,
        col: int,
        nx: int = 50,
        ny: int = 50,
        scaling: str = "local",
        mode: str = "code",
        filters: list[str] = Query(default=[], alias="filter"),
    ) -> dict:
        _check_cell(row, col)
        view = _parse_view(nx, ny, scaling, mode, filters)
        common = {
            "row": row,
            "col": col,
            "scaling": view.scaling.value,
            "mode": view.mode.value,
        }
        if row == col:
            hist = compute_histogram_bins(
                dataset, col, view.nx, view.filters, view.mode
            )
            values = (
                hist.counts.astype(np.float64)
                if view.scaling is Scaling.LOCAL
                else np.log1p(hist.counts.astype(np.float64))
            )
            vmax = float(values.max(initial=0.0))
            heights = values / vmax if vmax > 0 else np.zeros_like(values)
            return {
                **common,
                "kind": "histogram",
                "attr": _attr_payload(dataset, col),
                "n": hist.n,
                "range": list(hist.value_range),
                "counts": hist.counts.tolist(),
                "heights": heights.tolist(),
                "max_count": int(hist.counts.max(initial=0)),
                "category_totals": list(hist.category_totals),
            }
        grid = compute_scatter_bins(
            dataset, col, row, view.nx, view.ny, view.filters, view.mode
        )
        alphas = alpha_array(
            grid.counts, grid.bin_totals, grid.category_totals, view.scaling
        )
        ii, jj = np.nonzero(grid.bin_totals)
        bins = [
            {
                "x": i,
                "y": j,
                "total": int(grid.bin_totals[i, j]),
                "counts": grid.counts[i, j].tolist(),
                "alphas": alphas[i, j].tolist(),
            }
            for i, j in zip(ii.tolist(), jj.tolist())
        ]
        return {
            **common,
            "kind": "scatter",
            "attr_x": _attr_payload(dataset, col),
            "attr_y": _attr_payload(dataset, row),
            "nx": grid.nx,
            "ny": grid.ny,
            "x_range": list(grid.x_range),
            "y_range": list(grid.y_range),
            "category_totals": list(grid.category_totals),
            "bins": bins,
        }

    @app.get("/api/bininfo")
    def api_bininfo(
        row: int,
        col: int,
        x: int,
        y: int = 0,
        nx: int = 50,
        ny: int = 50,
        scaling: str = "local",
        mode: str = "code",
        filters: list[str] = Query(default=[], alias="filter"),
    ) -> dict:
        _check_cell(row, col)
        view = _parse_view(nx, ny, scaling, mode, filters)

        def bin_edges(rng: tuple[float, float], n: int, index: int) -> tuple[float, float]:
            lo, hi = rng
            if lo == hi:
                return lo, hi
            width = (hi - lo) / n
            return lo + index * width, lo + (index + 1) * width

        if row == col:
            hist = compute_histogram_bins(dataset, col, view.nx, view.filters, view.mode)
            if not 0 <= x < hist.n:
                raise _bad_request("bad_bin", f"x bin {x} outside [0, {hist.n})")
            counts = hist.counts[x]
            x_min, x_max = bin_edges(hist.value_range, hist.n, x)
            y_bin = None
            attr_y = col
        else:
            grid = compute_scatter_bins(
                dataset, col, row, view.nx, view.ny, view.filters, view.mode
            )
            if not 0 <= x < grid.nx:
                raise _bad_request("bad_bin", f"x bin {x} outside [0, {grid.nx})")
            if not 0 <= y < grid.ny:
                raise _bad_request("bad_bin", f"y bin {y} outside [0, {grid.ny})")
            counts = grid.counts[x, y]
            x_min, x_max = bin_edges(grid.x_range, grid.nx, x)
            y_min, y_max = bin_edges(grid.y_range, grid.ny, y)
            y_bin = {"index": y, "min": y_min, "max": y_max}
            attr_y = row

        bin_total = int(counts.sum())
        styles = tile_styles(view.mode)
        labels = category_labels(view.mode)
        totals = dataset.category_totals(view.mode)
        rows = [
            {
                "category": c,
                "label": labels[c],
                "color": list(styles[c].color),
                "count": int(counts[c]),
                "bin_total": bin_total,
                "category_total": totals[c],
            }
            for c in range(category_count(view.mode))
        ]
        return {
            "attr_x": _attr_payload(dataset, col),
            "attr_y": _attr_payload(dataset, attr_y),
            "x_bin": {"index": x, "min": x_min, "max": x_max},
            "y_bin": y_bin,
            "scaling": view.scaling.value,
            "mode": view.mode.value,
            "bin_total": bin_total,
            "categories": rows,
        }

    @app.get("/api/export")
    def api_export(
        format: str = "svg",
        width: int = 1200,
        height: int = 1200,
        nx: int = 50,
        ny: int = 50,
        scaling: str = "local",
        mode: str = "code",
        cell: str | None = None,
        filters: list[str] = Query(default=[], alias="filter"),
    ) -> Response:
        fmt = format.lower()
        if fmt not in _MEDIA_TYPES:
            raise _bad_request(
                "bad_format", f"unsupported format {format!r}; supported: svg, png"
            )
        if not (0 < width <= 20000 and 0 < height <= 20000):
            raise _bad_request("bad_size", "width/height must be in (0, 20000]")
        zoom = None
        if cell is not None:
            try:
                zoom = parse_cell(cell)
            except ValueError as exc:
                raise _bad_request("bad_cell", str(exc)) from exc
        view = _parse_view(nx, ny, scaling, mode, filters, zoom=zoom)
        document = render_splom(dataset, view, float(width), float(height))
        return Response(
            content=export(document, fmt, width, height),
            media_type=_MEDIA_TYPES[fmt],
        )

    @app.get("/api/session")
    def api_session_get(token: str) -> dict:
        with sessions_lock:
            view = sessions.get(token, SessionView())
        return {"token": token, "view": view.model_dump()}

    @app.put("/api/session")
    def api_session_put(token: str, view: SessionView) -> dict:
        try:
            parse_scaling(view.scaling)
            parse_mode(view.mode)
            if view.zoom is not None:
                row, col = view.zoom
                if not (0 <= row < N_ATTRIBUTES and 0 <= col < N_ATTRIBUTES):
                    raise ValueError(f"zoom cell out of range: {view.zoom}")
            if not (1 <= view.nx <= MAX_BINS and 1 <= view.ny <= MAX_BINS):
                raise ValueError(f"bin counts must be in [1, {MAX_BINS}]")
        except ValueError as exc:
            raise _bad_request("bad_session", str(exc)) from exc
        with sessions_lock:
            sessions[token] = view
        return {"token": token, "view": view.model_dump()}

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
