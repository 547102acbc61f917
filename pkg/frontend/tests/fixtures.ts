// Shared payload fixtures mirroring the server's wire shapes.

import type {
  AttributeMeta,
  BinInfo,
  CellPayload,
  HistogramPayload,
  Meta,
  ScatterPayload,
} from "../src/types.js";

const CODE_COLORS: [number, number, number][] = [
  [227, 26, 28],
  [178, 223, 138],
  [255, 127, 0],
  [166, 206, 227],
  [31, 120, 180],
  [253, 191, 111],
  [51, 160, 44],
  [251, 154, 153],
];

const CODE_POSITIONS: [number, number][] = [
  [0, 0], [0, 1], [0, 2], [1, 0], [1, 2], [2, 0], [2, 1], [2, 2],
];

function attribute(index: number): AttributeMeta {
  const descriptors = [
    "MEF H3K4me3", "MEF H3K27me3", "MEF H3K9me3",
    "NPC H3K4me3", "NPC H3K27me3", "NPC H3K9me3",
    "CpG density", "Length",
  ];
  const kind = index < 6 ? "coverage" : index === 6 ? "cpg" : "length";
  const domain: [number, number] = index < 7 ? [0, 1] : [200, 20000];
  return {
    index,
    descriptor: descriptors[index],
    kind,
    filter_domain: domain,
    data_range: domain,
  };
}

export function makeMeta(): Meta {
  return {
    segment_count: 1000,
    cpg_available: true,
    reference_cell: "ESC",
    min_segment_length: 200,
    attributes: Array.from({ length: 8 }, (_, i) => attribute(i)),
    category_modes: {
      code: {
        labels: [
          "000 none", "001 H3K9me3", "010 H3K27me3", "011 H3K27me3, H3K9me3",
          "100 H3K4me3", "101 H3K4me3, H3K9me3", "110 H3K4me3, H3K27me3",
          "111 H3K4me3, H3K27me3, H3K9me3",
        ],
        colors: CODE_COLORS,
        positions: CODE_POSITIONS,
        totals: [125, 125, 125, 125, 125, 125, 125, 125],
      },
      length: {
        labels: ["200 ≤ l ≤ 400", "400 < l ≤ 600", "600 < l ≤ 800", "800 < l ≤ 1000", "l > 1000"],
        colors: CODE_COLORS.slice(0, 5),
        positions: [[0, 0], [0, 1], [0, 2], [1, 0], [1, 2]],
        totals: [400, 300, 150, 100, 50],
      },
    },
  };
}

export function makeScatter(row: number, col: number): ScatterPayload {
  return {
    kind: "scatter",
    row,
    col,
    scaling: "local",
    mode: "code",
    attr_x: attribute(col),
    attr_y: attribute(row),
    nx: 2,
    ny: 2,
    x_range: [0, 1],
    y_range: [0, 1],
    category_totals: [125, 125, 125, 125, 125, 125, 125, 125],
    bins: [
      { x: 0, y: 0, total: 2, counts: [1, 0, 0, 0, 1, 0, 0, 0], alphas: [0.5, 0, 0, 0, 0.5, 0, 0, 0] },
      { x: 1, y: 1, total: 1, counts: [0, 0, 0, 0, 0, 0, 0, 1], alphas: [0, 0, 0, 0, 0, 0, 0, 1] },
    ],
  };
}

export function makeHistogram(rowcol: number): HistogramPayload {
  return {
    kind: "histogram",
    row: rowcol,
    col: rowcol,
    scaling: "local",
    mode: "code",
    attr: attribute(rowcol),
    n: 4,
    range: [0, 1],
    counts: [
      [8, 0, 0, 0, 0, 0, 0, 0],
      [0, 4, 0, 0, 0, 0, 0, 0],
      [0, 0, 0, 0, 0, 0, 0, 0],
      [0, 0, 0, 0, 0, 0, 2, 0],
    ],
    heights: [
      [1, 0, 0, 0, 0, 0, 0, 0],
      [0, 0.5, 0, 0, 0, 0, 0, 0],
      [0, 0, 0, 0, 0, 0, 0, 0],
      [0, 0, 0, 0, 0, 0, 0.25, 0],
    ],
    max_count: 8,
    category_totals: [125, 125, 125, 125, 125, 125, 125, 125],
  };
}

export function makeCell(row: number, col: number): CellPayload {
  return row === col ? makeHistogram(row) : makeScatter(row, col);
}

export function makeBinInfo(): BinInfo {
  return {
    attr_x: attribute(5),
    attr_y: attribute(2),
    x_bin: { index: 3, min: 0.06, max: 0.08 },
    y_bin: { index: 1, min: 0.02, max: 0.04 },
    scaling: "local",
    mode: "code",
    bin_total: 10,
    categories: [
      { category: 0, label: "000 none", color: [227, 26, 28], count: 4, bin_total: 10, category_total: 125 },
      { category: 1, label: "001 H3K9me3", color: [178, 223, 138], count: 0, bin_total: 10, category_total: 125 },
      { category: 2, label: "010 H3K27me3", color: [255, 127, 0], count: 1, bin_total: 10, category_total: 125 },
      { category: 3, label: "011 H3K27me3, H3K9me3", color: [166, 206, 227], count: 0, bin_total: 10, category_total: 125 },
      { category: 4, label: "100 H3K4me3", color: [31, 120, 180], count: 3, bin_total: 10, category_total: 125 },
      { category: 5, label: "101 H3K4me3, H3K9me3", color: [253, 191, 111], count: 0, bin_total: 10, category_total: 125 },
      { category: 6, label: "110 H3K4me3, H3K27me3", color: [51, 160, 44], count: 2, bin_total: 10, category_total: 125 },
      { category: 7, label: "111 H3K4me3, H3K27me3, H3K9me3", color: [251, 154, 153], count: 0, bin_total: 10, category_total: 125 },
    ],
  };
}
