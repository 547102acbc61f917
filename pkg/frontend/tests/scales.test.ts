import { describe, expect, it } from "vitest";

import { compositeOnWhite, formatValue, hexColor, sliderToValue, valueToSlider } from "../src/scales.js";
import { makeMeta } from "./fixtures.js";

const meta = makeMeta();
const coverage = meta.attributes[0];
const length = meta.attributes[7];

describe("slider transforms", () => {
  it("coverage sliders are identity", () => {
    expect(sliderToValue(0.37, coverage, meta)).toBeCloseTo(0.37, 12);
    expect(valueToSlider(0.37, coverage, meta)).toBeCloseTo(0.37, 12);
  });

  it("length endpoints map to the domain", () => {
    expect(sliderToValue(0, length, meta)).toBeCloseTo(200, 9);
    expect(sliderToValue(1, length, meta)).toBeCloseTo(20000, 9);
    expect(valueToSlider(200, length, meta)).toBe(0);
    expect(valueToSlider(20000, length, meta)).toBeCloseTo(1, 12);
  });

  it("length slider midpoint is the geometric mean of the bounds", () => {
    const mid = sliderToValue(0.5, length, meta);
    expect(mid).toBeCloseTo(Math.sqrt(200 * 20000), 6);
  });

  it("transforms are inverse of each other", () => {
    for (const t of [0, 0.1, 0.25, 0.5, 0.9, 1]) {
      expect(valueToSlider(sliderToValue(t, length, meta), length, meta)).toBeCloseTo(t, 9);
    }
  });

  it("length transform is monotone", () => {
    let prev = -Infinity;
    for (let i = 0; i <= 20; i++) {
      const v = sliderToValue(i / 20, length, meta);
      expect(v).toBeGreaterThan(prev);
      prev = v;
    }
  });
});

describe("compositeOnWhite", () => {
  it("matches the server compositing on a known blend", () => {
    expect(compositeOnWhite([31, 120, 180], 0.5)).toEqual([143, 188, 218]);
  });

  it("keeps endpoints exact", () => {
    expect(compositeOnWhite([227, 26, 28], 1)).toEqual([227, 26, 28]);
    expect(compositeOnWhite([227, 26, 28], 0)).toEqual([255, 255, 255]);
  });

  it("hex encodes with padding", () => {
    expect(hexColor([227, 26, 28])).toBe("#e31a1c");
    expect(hexColor([0, 0, 0])).toBe("#000000");
  });
});

describe("formatValue", () => {
  it("keeps integers and trims long fractions", () => {
    expect(formatValue(200)).toBe("200");
    expect(formatValue(0.015)).toBe("0.015");
    expect(formatValue(1 / 3)).toBe("0.3333");
  });
});
