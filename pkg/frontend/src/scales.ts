// Slider <-> attribute-unit transforms and the white-composite color math.

import type { AttributeMeta, Meta, Rgb } from "./types.js";

/** Map a slider position t in [0,1] to attribute units.
 *
 * Coverage and CpG sliders are identity; the length slider is logarithmic
 * over [min segment length, max length].
 */
export function sliderToValue(t: number, attr: AttributeMeta, meta: Meta): number {
  const clamped = Math.min(Math.max(t, 0), 1);
  if (attr.kind !== "length") {
    const [lo, hi] = attr.filter_domain;
    return lo + clamped * (hi - lo);
  }
  const minLen = meta.min_segment_length;
  const maxLen = attr.filter_domain[1];
  if (maxLen <= minLen) return minLen;
  return minLen * Math.pow(maxLen / minLen, clamped);
}

/** Inverse of sliderToValue; out-of-domain values clamp to [0,1]. */
export function valueToSlider(value: number, attr: AttributeMeta, meta: Meta): number {
  if (attr.kind !== "length") {
    const [lo, hi] = attr.filter_domain;
    if (hi <= lo) return 0;
    return Math.min(Math.max((value - lo) / (hi - lo), 0), 1);
  }
  const minLen = meta.min_segment_length;
  const maxLen = attr.filter_domain[1];
  if (maxLen <= minLen) return 0;
  const t = Math.log(value / minLen) / Math.log(maxLen / minLen);
  return Math.min(Math.max(t, 0), 1);
}

/** Blend a category color over white; channel = floor(a*c + (1-a)*255 + 0.5).
 *
 * Must match the server's compositing exactly so displayed tiles equal
 * exported ones.
 */
export function compositeOnWhite(color: Rgb, alpha: number): Rgb {
  return color.map((c) => Math.floor(alpha * c + (1 - alpha) * 255 + 0.5)) as Rgb;
}

export function hexColor(color: Rgb): string {
  return "#" + color.map((c) => c.toString(16).padStart(2, "0")).join("");
}

/** Compact value for axis endpoints and panel fields (4 significant digits). */
export function formatValue(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  if (Number.isInteger(v) && Math.abs(v) < 1e15) return String(v);
  return String(Number(v.toPrecision(4)));
}
