// DOM wiring: connects the orchestrator to the grid view, info panel,
// controls bar, error banner, URL, and window scroll.

import { ApiClient } from "./api.js";
import { Controls } from "./controls.js";
import { Explorer } from "./explorer.js";
import type { ExplorerView } from "./explorer.js";
import { InfoPanel } from "./infopanel.js";
import { SplomView } from "./splom.js";
import type { ViewQuery } from "./state.js";
import type { BinInfo, CellPayload, Meta } from "./types.js";

const CELL_SIZE = 96;

function element(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
}

function start(): void {
  const api = new ApiClient("");
  const banner = element("error-banner");
  const panel = new InfoPanel(element("info-panel"));
  let scroll: [number, number] = [0, 0];

  const splom = new SplomView(element("splom"), {
    onSelect: (row, col, x, y) => void explorer.selectBin(row, col, x, y),
    onZoom: (row, col) => void explorer.toggleZoom(row, col),
  });

  const view: ExplorerView = {
    renderCells(meta: Meta, state: ViewQuery, payloads: Map<string, CellPayload>) {
      splom.render(meta, state, payloads, CELL_SIZE);
      controls.setZoomed(state.zoom !== null);
    },
    showError(message: string) {
      banner.hidden = false;
      banner.querySelector(".message")!.textContent = message;
    },
    clearError() {
      banner.hidden = true;
    },
    showBinInfo(info: BinInfo) {
      panel.show(info);
    },
    clearBinInfo() {
      panel.clear();
    },
    syncControls(state: ViewQuery) {
      controls.build(explorer.meta);
      controls.sync(state);
    },
    updateUrl(query: string) {
      history.replaceState(null, "", `?${query}`);
    },
    saveScroll() {
      scroll = [window.scrollX, window.scrollY];
    },
    restoreScroll() {
      window.scrollTo(scroll[0], scroll[1]);
    },
  };

  const explorer = new Explorer(api, view);

  const controls = new Controls(element("controls"), {
    onBins: (nx, ny) => void explorer.setBins(nx, ny),
    onScaling: (scaling) => void explorer.setScaling(scaling),
    onMode: (mode) => void explorer.setMode(mode),
    onFilter: (attr, lo, hi) => void explorer.setFilter(attr, lo, hi),
    onExport: (format) => {
      window.open(api.exportUrl(explorer.state, format, 1600, 1600), "_blank");
    },
    onUnzoom: () => {
      if (explorer.state.zoom) {
        void explorer.toggleZoom(...explorer.state.zoom);
      }
    },
  });

  banner.querySelector(".retry")!.addEventListener("click", () => void explorer.refresh());
  element("splom").addEventListener("click", (event) => {
    if (event.target === element("splom")) explorer.clearSelection();
  });

  void explorer.start(location.search.replace(/^\?/, ""));
}

document.addEventListener("DOMContentLoaded", start);
