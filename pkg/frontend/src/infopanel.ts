// Bin info panel: the detail view shown when a bin is selected.

import { formatValue, hexColor } from "./scales.js";
import type { BinInfo } from "./types.js";

export interface PanelField {
  label: string;
  value: string;
}

export interface PanelRow {
  color: string;
  label: string;
  count: number;
  binTotal: number;
  categoryTotal: number;
}

export interface PanelModel {
  fields: PanelField[];
  rows: PanelRow[];
}

/** Flatten a bin-info payload into labelled fields plus per-color rows.
 *
 * Every row repeats the selected bin's total (the local maximum) and the
 * category's dataset-wide total (the global maximum, constant).
 */
export function panelModel(info: BinInfo): PanelModel {
  const fields: PanelField[] = [
    {
      label: "Attribute on the x-axis",
      value: `#${info.attr_x.index} ${info.attr_x.descriptor}`,
    },
    {
      label: "Attribute on the y-axis",
      value: `#${info.attr_y.index} ${info.attr_y.descriptor}`,
    },
    {
      label: "Bin on the x-axis",
      value: `#${info.x_bin.index}: min ${formatValue(info.x_bin.min)}, max ${formatValue(info.x_bin.max)}`,
    },
    {
      label: "Bin on the y-axis",
      value: info.y_bin
        ? `#${info.y_bin.index}: min ${formatValue(info.y_bin.min)}, max ${formatValue(info.y_bin.max)}`
        : "(histogram cell)",
    },
    { label: "Averaging method", value: `${info.scaling} average` },
    {
      label: "Color encoding",
      value: info.mode === "code" ? "by ESC code" : "by length",
    },
  ];
  const rows = info.categories.map((row) => ({
    color: hexColor(row.color),
    label: row.label,
    count: row.count,
    binTotal: row.bin_total,
    categoryTotal: row.category_total,
  }));
  return { fields, rows };
}

export class InfoPanel {
  constructor(private readonly root: HTMLElement) {}

  clear(): void {
    this.root.innerHTML = "";
    this.root.classList.remove("open");
  }

  show(info: BinInfo): void {
    const model = panelModel(info);
    this.root.innerHTML = "";
    this.root.classList.add("open");

    const heading = document.createElement("h2");
    heading.textContent = "Bin info";
    this.root.appendChild(heading);

    const list = document.createElement("dl");
    list.className = "panel-fields";
    for (const field of model.fields) {
      const dt = document.createElement("dt");
      dt.textContent = field.label;
      const dd = document.createElement("dd");
      dd.textContent = field.value;
      list.append(dt, dd);
    }
    this.root.appendChild(list);

    const table = document.createElement("table");
    table.className = "panel-rows";
    const head = table.insertRow();
    for (const text of ["", "Category", "In bin", "Local max (bin)", "Global max (category)"]) {
      const th = document.createElement("th");
      th.textContent = text;
      head.appendChild(th);
    }
    for (const row of model.rows) {
      const tr = table.insertRow();
      const swatchCell = tr.insertCell();
      const swatch = document.createElement("span");
      swatch.className = "swatch";
      swatch.style.backgroundColor = row.color;
      swatchCell.appendChild(swatch);
      tr.insertCell().textContent = row.label;
      tr.insertCell().textContent = String(row.count);
      tr.insertCell().textContent = String(row.binTotal);
      tr.insertCell().textContent = String(row.categoryTotal);
    }
    this.root.appendChild(table);
  }
}
