// View state and its URL query-string encoding: everything needed to
// reproduce a view travels in the URL.

import { N_ATTRIBUTES } from "./types.js";
import type { Meta, Mode, Scaling } from "./types.js";

export interface ViewQuery {
  nx: number;
  ny: number;
  scaling: Scaling;
  mode: Mode;
  /** Per-attribute [lo, hi] in attribute units; always all 8. */
  filters: [number, number][];
  zoom: [number, number] | null;
}

export function defaultFilters(meta: Meta): [number, number][] {
  return meta.attributes.map((a) => [...a.filter_domain] as [number, number]);
}

export function defaultState(meta: Meta): ViewQuery {
  return {
    nx: 50,
    ny: 50,
    scaling: "local",
    mode: "code",
    filters: defaultFilters(meta),
    zoom: null,
  };
}

function sameRange(a: [number, number], b: [number, number]): boolean {
  return a[0] === b[0] && a[1] === b[1];
}

/** attr:lo:hi tokens for every filter narrower than its full domain. */
export function filterTokens(state: ViewQuery, meta: Meta): string[] {
  const tokens: string[] = [];
  const defaults = defaultFilters(meta);
  state.filters.forEach((range, i) => {
    if (!sameRange(range, defaults[i])) {
      tokens.push(`${i}:${range[0]}:${range[1]}`);
    }
  });
  return tokens;
}

export function encodeState(state: ViewQuery, meta: Meta): string {
  const params = new URLSearchParams();
  params.set("nx", String(state.nx));
  params.set("ny", String(state.ny));
  params.set("scaling", state.scaling);
  params.set("mode", state.mode);
  for (const token of filterTokens(state, meta)) {
    params.append("filter", token);
  }
  if (state.zoom) params.set("zoom", `${state.zoom[0]},${state.zoom[1]}`);
  return params.toString();
}

export function decodeState(query: string, meta: Meta): ViewQuery {
  const params = new URLSearchParams(query);
  const state = defaultState(meta);
  const nx = Number(params.get("nx"));
  const ny = Number(params.get("ny"));
  if (Number.isInteger(nx) && nx >= 1) state.nx = nx;
  if (Number.isInteger(ny) && ny >= 1) state.ny = ny;
  const scaling = params.get("scaling");
  if (scaling === "local" || scaling === "global") state.scaling = scaling;
  const mode = params.get("mode");
  if (mode === "code" || mode === "length") state.mode = mode;
  for (const token of params.getAll("filter")) {
    const [attr, lo, hi] = token.split(":").map(Number);
    if (
      Number.isInteger(attr) && attr >= 0 && attr < N_ATTRIBUTES &&
      Number.isFinite(lo) && Number.isFinite(hi) && lo <= hi
    ) {
      state.filters[attr] = [lo, hi];
    }
  }
  const zoom = params.get("zoom");
  if (zoom) {
    const [row, col] = zoom.split(",").map(Number);
    if (
      Number.isInteger(row) && row >= 0 && row < N_ATTRIBUTES &&
      Number.isInteger(col) && col >= 0 && col < N_ATTRIBUTES
    ) {
      state.zoom = [row, col];
    }
  }
  return state;
}
