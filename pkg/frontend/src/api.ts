// Thin fetch client for the bin-query API.

import { filterTokens } from "./state.js";
import type { ViewQuery } from "./state.js";
import type { BinInfo, CellPayload, Meta } from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  const response = await fetch(url, { signal });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      detail = JSON.stringify(body);
    } catch {
      // keep statusText
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly base: string = "", private readonly metaRef: { meta: Meta | null } = { meta: null }) {}

  private viewParams(state: ViewQuery): URLSearchParams {
    const params = new URLSearchParams();
    params.set("nx", String(state.nx));
    params.set("ny", String(state.ny));
    params.set("scaling", state.scaling);
    params.set("mode", state.mode);
    if (this.metaRef.meta) {
      for (const token of filterTokens(state, this.metaRef.meta)) {
        params.append("filter", token);
      }
    }
    return params;
  }

  async meta(): Promise<Meta> {
    const meta = await getJson<Meta>(`${this.base}/api/meta`);
    this.metaRef.meta = meta;
    return meta;
  }

  cell(state: ViewQuery, row: number, col: number, signal?: AbortSignal): Promise<CellPayload> {
    const params = this.viewParams(state);
    params.set("row", String(row));
    params.set("col", String(col));
    return getJson<CellPayload>(`${this.base}/api/cell?${params}`, signal);
  }

  binInfo(
    state: ViewQuery,
    row: number,
    col: number,
    x: number,
    y: number,
    signal?: AbortSignal,
  ): Promise<BinInfo> {
    const params = this.viewParams(state);
    params.set("row", String(row));
    params.set("col", String(col));
    params.set("x", String(x));
    params.set("y", String(y));
    return getJson<BinInfo>(`${this.base}/api/bininfo?${params}`, signal);
  }

  exportUrl(state: ViewQuery, format: "svg" | "png", width: number, height: number): string {
    const params = this.viewParams(state);
    params.set("format", format);
    params.set("width", String(width));
    params.set("height", String(height));
    if (state.zoom) params.set("cell", `${state.zoom[0]},${state.zoom[1]}`);
    return `${this.base}/api/export?${params}`;
  }
}
