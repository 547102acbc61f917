// Shapes of the HTTP API payloads the UI consumes. Every number shown
// anywhere in the interface comes from one of these (thin-client contract).

export type Scaling = "local" | "global";
export type Mode = "code" | "length";

export type Rgb = [number, number, number];

export interface AttributeMeta {
  index: number;
  descriptor: string;
  kind: "coverage" | "cpg" | "length";
  filter_domain: [number, number];
  data_range: [number, number];
}

export interface ModeMeta {
  labels: string[];
  colors: Rgb[];
  positions: [number, number][];
  totals: number[];
}

export interface Meta {
  segment_count: number;
  cpg_available: boolean;
  reference_cell: string;
  min_segment_length: number;
  attributes: AttributeMeta[];
  category_modes: Record<Mode, ModeMeta>;
}

export interface ScatterBin {
  x: number;
  y: number;
  total: number;
  counts: number[];
  alphas: number[];
}

export interface ScatterPayload {
  kind: "scatter";
  row: number;
  col: number;
  scaling: Scaling;
  mode: Mode;
  attr_x: AttributeMeta;
  attr_y: AttributeMeta;
  nx: number;
  ny: number;
  x_range: [number, number];
  y_range: [number, number];
  category_totals: number[];
  bins: ScatterBin[];
}

export interface HistogramPayload {
  kind: "histogram";
  row: number;
  col: number;
  scaling: Scaling;
  mode: Mode;
  attr: AttributeMeta;
  n: number;
  range: [number, number];
  counts: number[][];
  heights: number[][];
  max_count: number;
  category_totals: number[];
}

export type CellPayload = ScatterPayload | HistogramPayload;

export interface BinInfoRow {
  category: number;
  label: string;
  color: Rgb;
  count: number;
  bin_total: number;
  category_total: number;
}

export interface BinEdge {
  index: number;
  min: number;
  max: number;
}

export interface BinInfo {
  attr_x: AttributeMeta;
  attr_y: AttributeMeta;
  x_bin: BinEdge;
  y_bin: BinEdge | null;
  scaling: Scaling;
  mode: Mode;
  bin_total: number;
  categories: BinInfoRow[];
}

export const N_ATTRIBUTES = 8;
