// Pure geometry for one cell: API payload -> flat rectangles to draw.
// Opacities and bar heights come from the server untouched; only the
// color compositing (display concern) happens here.

import { compositeOnWhite, hexColor } from "./scales.js";
import type { HistogramPayload, ModeMeta, ScatterPayload } from "./types.js";

export interface TileRect {
  x: number;
  y: number;
  w: number;
  h: number;
  fill: string;
}

/** Tiles for one scatter cell drawn into a w x h box (y grows downward). */
export function scatterTiles(
  payload: ScatterPayload,
  modeMeta: ModeMeta,
  w: number,
  h: number,
): TileRect[] {
  const bw = w / payload.nx;
  const bh = h / payload.ny;
  const tw = bw / 3;
  const th = bh / 3;
  const tiles: TileRect[] = [];
  for (const bin of payload.bins) {
    const bx = bin.x * bw;
    const by = h - (bin.y + 1) * bh;
    bin.counts.forEach((count, cat) => {
      if (count === 0) return;
      const [tileRow, tileCol] = modeMeta.positions[cat];
      tiles.push({
        x: bx + tileCol * tw,
        y: by + tileRow * th,
        w: tw,
        h: th,
        fill: hexColor(compositeOnWhite(modeMeta.colors[cat], bin.alphas[cat])),
      });
    });
  }
  return tiles;
}

/** Bars for one diagonal histogram cell; heights are server-normalized. */
export function histogramBars(
  payload: HistogramPayload,
  modeMeta: ModeMeta,
  w: number,
  h: number,
): TileRect[] {
  const ncat = modeMeta.colors.length;
  const bw = w / payload.n;
  const sub = bw / ncat;
  const bars: TileRect[] = [];
  payload.heights.forEach((row, b) => {
    row.forEach((height, cat) => {
      if (height <= 0) return;
      bars.push({
        x: b * bw + cat * sub,
        y: h - height * h,
        w: sub,
        h: height * h,
        fill: hexColor(modeMeta.colors[cat]),
      });
    });
  });
  return bars;
}

/** Bin indices under a pixel position inside a w x h cell box. */
export function pickBin(
  px: number,
  py: number,
  nx: number,
  ny: number,
  w: number,
  h: number,
): { x: number; y: number } {
  const clampedX = Math.min(Math.max(px, 0), w);
  const clampedY = Math.min(Math.max(py, 0), h);
  return {
    x: Math.min(Math.floor((clampedX / w) * nx), nx - 1),
    y: Math.min(Math.floor(((h - clampedY) / h) * ny), ny - 1),
  };
}
