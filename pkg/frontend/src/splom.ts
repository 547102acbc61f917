// The 8x8 SPLOM grid (or one zoomed cell) rendered as per-cell SVG elements
// inside a CSS grid, with descriptors and axis endpoint labels around it.

import { formatValue } from "./scales.js";
import { histogramBars, pickBin, scatterTiles } from "./tiles.js";
import type { TileRect } from "./tiles.js";
import type { ViewQuery } from "./state.js";
import { N_ATTRIBUTES } from "./types.js";
import type { CellPayload, Meta } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface CellEventHandlers {
  onSelect(row: number, col: number, x: number, y: number): void;
  onZoom(row: number, col: number): void;
}

function appendRects(svg: SVGSVGElement, rects: TileRect[]): void {
  for (const rect of rects) {
    const el = document.createElementNS(SVG_NS, "rect");
    el.setAttribute("x", rect.x.toFixed(2));
    el.setAttribute("y", rect.y.toFixed(2));
    el.setAttribute("width", rect.w.toFixed(2));
    el.setAttribute("height", rect.h.toFixed(2));
    el.setAttribute("fill", rect.fill);
    svg.appendChild(el);
  }
}

export class SplomView {
  constructor(
    private readonly root: HTMLElement,
    private readonly handlers: CellEventHandlers,
  ) {}

  /** Rebuild the grid from one payload per visible cell. */
  render(
    meta: Meta,
    state: ViewQuery,
    payloads: Map<string, CellPayload>,
    cellSize: number,
  ): void {
    this.root.innerHTML = "";
    if (state.zoom) {
      const [row, col] = state.zoom;
      const payload = payloads.get(`${row},${col}`);
      if (payload) {
        this.root.appendChild(
          this.buildCell(meta, state, payload, cellSize * 6, true),
        );
      }
      return;
    }

    const grid = document.createElement("div");
    grid.className = "splom-grid";
    grid.style.gridTemplateColumns = `auto repeat(${N_ATTRIBUTES}, min-content)`;

    grid.appendChild(document.createElement("span")); // top-left corner
    for (let col = 0; col < N_ATTRIBUTES; col++) {
      const label = document.createElement("div");
      label.className = "col-descriptor";
      label.textContent = meta.attributes[col].descriptor;
      grid.appendChild(label);
    }

    for (let row = 0; row < N_ATTRIBUTES; row++) {
      const rowLabel = document.createElement("div");
      rowLabel.className = "row-descriptor";
      const name = document.createElement("div");
      name.textContent = meta.attributes[row].descriptor;
      const range = document.createElement("div");
      range.className = "axis-range axis-range-y";
      range.dataset.attr = String(row);
      const [lo, hi] = state.filters[row];
      range.textContent = `${formatValue(lo)} – ${formatValue(hi)}`;
      rowLabel.append(name, range);
      grid.appendChild(rowLabel);
      for (let col = 0; col < N_ATTRIBUTES; col++) {
        const payload = payloads.get(`${row},${col}`);
        const holder = document.createElement("div");
        holder.className = "cell-holder";
        if (payload) {
          holder.appendChild(this.buildCell(meta, state, payload, cellSize, false));
        }
        grid.appendChild(holder);
      }
    }

    grid.appendChild(document.createElement("span"));
    for (let col = 0; col < N_ATTRIBUTES; col++) {
      const range = document.createElement("div");
      range.className = "axis-range axis-range-x";
      range.dataset.attr = String(col);
      const [lo, hi] = state.filters[col];
      range.textContent = `${formatValue(lo)} – ${formatValue(hi)}`;
      grid.appendChild(range);
    }

    this.root.appendChild(grid);
  }

  private buildCell(
    meta: Meta,
    state: ViewQuery,
    payload: CellPayload,
    size: number,
    zoomed: boolean,
  ): SVGSVGElement {
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("width", String(size));
    svg.setAttribute("height", String(size));
    svg.setAttribute("viewBox", `0 0 ${size} ${size}`);
    svg.classList.add("splom-cell");
    if (zoomed) svg.classList.add("zoomed");
    svg.dataset.row = String(payload.row);
    svg.dataset.col = String(payload.col);

    const modeMeta = meta.category_modes[state.mode];
    const frame = document.createElementNS(SVG_NS, "rect");
    frame.setAttribute("x", "0");
    frame.setAttribute("y", "0");
    frame.setAttribute("width", String(size));
    frame.setAttribute("height", String(size));
    frame.setAttribute("fill", "#ffffff");
    frame.setAttribute("stroke", "#aaaaaa");
    svg.appendChild(frame);

    if (payload.kind === "scatter") {
      appendRects(svg, scatterTiles(payload, modeMeta, size, size));
    } else {
      appendRects(svg, histogramBars(payload, modeMeta, size, size));
    }

    svg.addEventListener("click", (event) => {
      const rect = svg.getBoundingClientRect();
      const px = event.clientX - rect.left;
      const py = event.clientY - rect.top;
      const nx = payload.kind === "scatter" ? payload.nx : payload.n;
      const ny = payload.kind === "scatter" ? payload.ny : 1;
      const bin = pickBin(px, py, nx, ny, size, size);
      this.handlers.onSelect(payload.row, payload.col, bin.x, bin.y);
    });
    svg.addEventListener("contextmenu", (event) => {
      event.preventDefault();
      this.handlers.onZoom(payload.row, payload.col);
    });
    return svg;
  }
}
