// View orchestration: owns the state, issues query waves, and hands results
// to the presentation layer. No DOM access here so the whole flow is
// testable headlessly.

import { decodeState, defaultState, encodeState } from "./state.js";
import type { ViewQuery } from "./state.js";
import { N_ATTRIBUTES } from "./types.js";
import type { BinInfo, CellPayload, Meta } from "./types.js";

export interface CellApi {
  meta(): Promise<Meta>;
  cell(state: ViewQuery, row: number, col: number, signal?: AbortSignal): Promise<CellPayload>;
  binInfo(
    state: ViewQuery,
    row: number,
    col: number,
    x: number,
    y: number,
    signal?: AbortSignal,
  ): Promise<BinInfo>;
}

export interface ExplorerView {
  renderCells(meta: Meta, state: ViewQuery, payloads: Map<string, CellPayload>): void;
  showError(message: string): void;
  clearError(): void;
  showBinInfo(info: BinInfo): void;
  clearBinInfo(): void;
  syncControls(state: ViewQuery): void;
  updateUrl(query: string): void;
  saveScroll(): void;
  restoreScroll(): void;
}

function isAbort(err: unknown): boolean {
  return err instanceof Error && err.name === "AbortError";
}

export class Explorer {
  meta!: Meta;
  state!: ViewQuery;
  /** Completed recompute round-trips (one per query wave). */
  refreshCount = 0;

  private inflight: AbortController | null = null;
  private cache = new Map<string, CellPayload>();

  constructor(
    private readonly api: CellApi,
    private readonly view: ExplorerView,
  ) {}

  async start(query: string): Promise<void> {
    try {
      this.meta = await this.api.meta();
    } catch (err) {
      this.view.showError(`failed to load dataset metadata: ${err}`);
      throw err;
    }
    this.state = query ? decodeState(query, this.meta) : defaultState(this.meta);
    this.view.syncControls(this.state);
    await this.refresh();
  }

  private visibleCells(): [number, number][] {
    if (this.state.zoom) return [this.state.zoom];
    const cells: [number, number][] = [];
    for (let row = 0; row < N_ATTRIBUTES; row++) {
      for (let col = 0; col < N_ATTRIBUTES; col++) {
        cells.push([row, col]);
      }
    }
    return cells;
  }

  /** One query wave for every visible cell; stale waves are cancelled. */
  async refresh(): Promise<void> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const cells = this.visibleCells();
    try {
      const payloads = await Promise.all(
        cells.map(([row, col]) => this.api.cell(this.state, row, col, controller.signal)),
      );
      if (controller.signal.aborted) return;
      this.cache = new Map(
        payloads.map((p, i) => [`${cells[i][0]},${cells[i][1]}`, p]),
      );
      this.refreshCount += 1;
      this.view.clearError();
      this.view.renderCells(this.meta, this.state, this.cache);
      this.view.updateUrl(encodeState(this.state, this.meta));
    } catch (err) {
      if (isAbort(err) || controller.signal.aborted) return;
      this.view.showError(String(err));
    }
  }

  /** Slider release: replace one attribute's range, then exactly one wave. */
  async setFilter(attr: number, lo: number, hi: number): Promise<void> {
    this.state.filters[attr] = [Math.min(lo, hi), Math.max(lo, hi)];
    this.view.clearBinInfo(); // selection is stale once bins move
    await this.refresh();
  }

  async setBins(nx: number, ny: number): Promise<void> {
    if (nx >= 1) this.state.nx = Math.floor(nx);
    if (ny >= 1) this.state.ny = Math.floor(ny);
    this.view.clearBinInfo();
    await this.refresh();
  }

  async setScaling(scaling: ViewQuery["scaling"]): Promise<void> {
    this.state.scaling = scaling;
    await this.refresh();
  }

  async setMode(mode: ViewQuery["mode"]): Promise<void> {
    this.state.mode = mode;
    this.view.clearBinInfo();
    await this.refresh();
  }

  /** Secondary-click zoom; zooming the same cell again restores the grid
   * (and the grid's scroll position). Re-layout only when the payloads are
   * already cached. */
  async toggleZoom(row: number, col: number): Promise<void> {
    const zoomed = this.state.zoom;
    if (zoomed && zoomed[0] === row && zoomed[1] === col) {
      this.state.zoom = null;
      if (this.cacheCovers()) {
        this.view.renderCells(this.meta, this.state, this.cache);
        this.view.updateUrl(encodeState(this.state, this.meta));
      } else {
        await this.refresh();
      }
      this.view.restoreScroll();
      return;
    }
    if (!zoomed) this.view.saveScroll();
    this.state.zoom = [row, col];
    if (this.cache.has(`${row},${col}`)) {
      this.view.renderCells(this.meta, this.state, this.cache);
      this.view.updateUrl(encodeState(this.state, this.meta));
    } else {
      await this.refresh();
    }
  }

  private cacheCovers(): boolean {
    return this.visibleCells().every(([row, col]) => this.cache.has(`${row},${col}`));
  }

  /** Primary-click bin selection: fetch and show the info panel. */
  async selectBin(row: number, col: number, x: number, y: number): Promise<void> {
    try {
      const info = await this.api.binInfo(this.state, row, col, x, y);
      this.view.showBinInfo(info);
    } catch (err) {
      if (!isAbort(err)) this.view.showError(String(err));
    }
  }

  clearSelection(): void {
    this.view.clearBinInfo();
  }
}
