// Controls bar: bin counts, scaling/mode toggles, export, zoom fallback,
// and the eight range-slider filters (log scale for length).
//
// Slider 'input' events only move the readout; the query fires once on
// 'change' (release).

import { formatValue, sliderToValue, valueToSlider } from "./scales.js";
import type { ViewQuery } from "./state.js";
import { N_ATTRIBUTES } from "./types.js";
import type { Meta, Mode, Scaling } from "./types.js";

const SLIDER_STEPS = 1000;

export interface ControlHandlers {
  onBins(nx: number, ny: number): void;
  onScaling(scaling: Scaling): void;
  onMode(mode: Mode): void;
  onFilter(attr: number, lo: number, hi: number): void;
  onExport(format: "svg" | "png"): void;
  onUnzoom(): void;
}

interface SliderRow {
  lo: HTMLInputElement;
  hi: HTMLInputElement;
  readout: HTMLElement;
}

export class Controls {
  private meta!: Meta;
  private nxInput!: HTMLInputElement;
  private nyInput!: HTMLInputElement;
  private scalingSelect!: HTMLSelectElement;
  private modeSelect!: HTMLSelectElement;
  private unzoomButton!: HTMLButtonElement;
  private sliders: SliderRow[] = [];

  constructor(
    private readonly root: HTMLElement,
    private readonly handlers: ControlHandlers,
  ) {}

  build(meta: Meta): void {
    this.meta = meta;
    this.root.innerHTML = "";

    const bar = document.createElement("div");
    bar.className = "controls-bar";

    this.nxInput = this.numberInput(bar, "bins x", 50);
    this.nyInput = this.numberInput(bar, "bins y", 50);
    const emitBins = () =>
      this.handlers.onBins(Number(this.nxInput.value), Number(this.nyInput.value));
    this.nxInput.addEventListener("change", emitBins);
    this.nyInput.addEventListener("change", emitBins);

    this.scalingSelect = this.select(bar, "scaling", ["local", "global"]);
    this.scalingSelect.addEventListener("change", () =>
      this.handlers.onScaling(this.scalingSelect.value as Scaling),
    );
    this.modeSelect = this.select(bar, "color by", ["code", "length"]);
    this.modeSelect.addEventListener("change", () =>
      this.handlers.onMode(this.modeSelect.value as Mode),
    );

    for (const format of ["svg", "png"] as const) {
      const button = document.createElement("button");
      button.textContent = `export ${format}`;
      button.className = `export-${format}`;
      button.addEventListener("click", () => this.handlers.onExport(format));
      bar.appendChild(button);
    }

    this.unzoomButton = document.createElement("button");
    this.unzoomButton.textContent = "back to matrix";
    this.unzoomButton.className = "unzoom";
    this.unzoomButton.hidden = true;
    this.unzoomButton.addEventListener("click", () => this.handlers.onUnzoom());
    bar.appendChild(this.unzoomButton);

    this.root.appendChild(bar);
    this.root.appendChild(this.buildSliders(meta));
  }

  private numberInput(parent: HTMLElement, label: string, value: number): HTMLInputElement {
    const wrap = document.createElement("label");
    wrap.textContent = label;
    const input = document.createElement("input");
    input.type = "number";
    input.min = "1";
    input.max = "1000";
    input.value = String(value);
    wrap.appendChild(input);
    parent.appendChild(wrap);
    return input;
  }

  private select(parent: HTMLElement, label: string, options: string[]): HTMLSelectElement {
    const wrap = document.createElement("label");
    wrap.textContent = label;
    const select = document.createElement("select");
    for (const option of options) {
      const el = document.createElement("option");
      el.value = option;
      el.textContent = option;
      select.appendChild(el);
    }
    wrap.appendChild(select);
    parent.appendChild(wrap);
    return select;
  }

  private buildSliders(meta: Meta): HTMLElement {
    const box = document.createElement("div");
    box.className = "filters";
    this.sliders = [];
    for (let attr = 0; attr < N_ATTRIBUTES; attr++) {
      const row = document.createElement("div");
      row.className = "filter-row";
      row.dataset.attr = String(attr);

      const name = document.createElement("span");
      name.className = "filter-name";
      name.textContent = meta.attributes[attr].descriptor;

      const lo = this.slider(0);
      const hi = this.slider(SLIDER_STEPS);
      const readout = document.createElement("span");
      readout.className = "filter-readout";

      const update = () => this.updateReadout(attr);
      lo.addEventListener("input", update);
      hi.addEventListener("input", update);
      const release = () => {
        const [loValue, hiValue] = this.sliderValues(attr);
        this.handlers.onFilter(attr, loValue, hiValue);
      };
      lo.addEventListener("change", release);
      hi.addEventListener("change", release);

      row.append(name, lo, hi, readout);
      box.appendChild(row);
      this.sliders.push({ lo, hi, readout });
      this.updateReadout(attr);
    }
    return box;
  }

  private slider(value: number): HTMLInputElement {
    const input = document.createElement("input");
    input.type = "range";
    input.min = "0";
    input.max = String(SLIDER_STEPS);
    input.value = String(value);
    return input;
  }

  private sliderValues(attr: number): [number, number] {
    const { lo, hi } = this.sliders[attr];
    const attrMeta = this.meta.attributes[attr];
    const a = sliderToValue(Number(lo.value) / SLIDER_STEPS, attrMeta, this.meta);
    const b = sliderToValue(Number(hi.value) / SLIDER_STEPS, attrMeta, this.meta);
    return a <= b ? [a, b] : [b, a];
  }

  private updateReadout(attr: number): void {
    const [lo, hi] = this.sliderValues(attr);
    this.sliders[attr].readout.textContent = `${formatValue(lo)} – ${formatValue(hi)}`;
  }

  /** Push state into the inputs (URL-decoded views, external changes). */
  sync(state: ViewQuery): void {
    this.nxInput.value = String(state.nx);
    this.nyInput.value = String(state.ny);
    this.scalingSelect.value = state.scaling;
    this.modeSelect.value = state.mode;
    this.unzoomButton.hidden = state.zoom === null;
    state.filters.forEach(([lo, hi], attr) => {
      const attrMeta = this.meta.attributes[attr];
      this.sliders[attr].lo.value = String(
        Math.round(valueToSlider(lo, attrMeta, this.meta) * SLIDER_STEPS),
      );
      this.sliders[attr].hi.value = String(
        Math.round(valueToSlider(hi, attrMeta, this.meta) * SLIDER_STEPS),
      );
      this.updateReadout(attr);
    });
  }

  setZoomed(zoomed: boolean): void {
    this.unzoomButton.hidden = !zoomed;
  }
}
