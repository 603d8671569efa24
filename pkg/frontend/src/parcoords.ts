// Parallel-coordinates SVG view. Mirrors the kernel renderer's layering:
// ungrouped rows first in row order as neutral gray, then each group in
// creation order with its color and alpha. The kernel ships normalized row
// values; this module never recomputes statistics.

import type { GroupState, ParcoordsFigure } from "./types.js";
import type { PlotBox } from "./brush.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NEUTRAL = "#888888";

export interface ViewOptions {
  width: number;
  height: number;
  margin: number;
}

export const DEFAULT_VIEW: ViewOptions = { width: 800, height: 500, margin: 40 };

export function plotBox(fig: ParcoordsFigure, opts: ViewOptions): PlotBox {
  return {
    left: opts.margin,
    top: opts.margin,
    width: opts.width - 2 * opts.margin,
    height: opts.height - 2 * opts.margin,
    axisCount: fig.axes.length,
  };
}

function axisX(box: PlotBox, i: number): number {
  const span = box.axisCount > 1 ? box.width / (box.axisCount - 1) : 0;
  return box.left + i * span;
}

function yPixel(box: PlotBox, norm: number): number {
  return box.top + box.height - norm * box.height;
}

function rowPoints(
  fig: ParcoordsFigure,
  box: PlotBox,
  row: number,
): string | null {
  const values = fig.rows[row];
  const points: string[] = [];
  for (let i = 0; i < fig.axes.length; i++) {
    const v = values[i];
    if (v === null) {
      return null; // broken rows are not brush targets; skip entirely
    }
    points.push(`${axisX(box, i).toFixed(2)},${yPixel(box, v).toFixed(2)}`);
  }
  return points.join(" ");
}

function polyline(
  doc: Document,
  points: string,
  stroke: string,
  opacity: number,
  cls: string,
): SVGElement {
  const el = doc.createElementNS(SVG_NS, "polyline") as SVGElement;
  el.setAttribute("points", points);
  el.setAttribute("fill", "none");
  el.setAttribute("stroke", stroke);
  el.setAttribute("stroke-opacity", opacity.toFixed(2));
  el.setAttribute("stroke-width", "1");
  el.setAttribute("class", cls);
  return el;
}

export function renderParcoords(
  doc: Document,
  container: Element,
  fig: ParcoordsFigure,
  groups: GroupState[],
  opts: ViewOptions = DEFAULT_VIEW,
): SVGElement {
  const box = plotBox(fig, opts);
  const svg = doc.createElementNS(SVG_NS, "svg") as SVGElement;
  svg.setAttribute("width", String(opts.width));
  svg.setAttribute("height", String(opts.height));
  svg.setAttribute("viewBox", `0 0 ${opts.width} ${opts.height}`);
  svg.setAttribute("data-figure", fig.figure);

  const grouped = new Set<number>();
  for (const group of groups) {
    for (const row of group.rows) {
      grouped.add(row);
    }
  }

  for (let row = 0; row < fig.n; row++) {
    if (grouped.has(row)) {
      continue;
    }
    const points = rowPoints(fig, box, row);
    if (points !== null) {
      svg.appendChild(polyline(doc, points, NEUTRAL, 1.0, "row"));
    }
  }
  for (const group of groups) {
    for (const row of group.rows) {
      const points = rowPoints(fig, box, row);
      if (points !== null) {
        svg.appendChild(
          polyline(doc, points, group.color, group.alpha, "row highlighted"),
        );
      }
    }
  }

  for (let i = 0; i < fig.axes.length; i++) {
    const x = axisX(box, i);
    const line = doc.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", x.toFixed(2));
    line.setAttribute("y1", String(box.top));
    line.setAttribute("x2", x.toFixed(2));
    line.setAttribute("y2", String(box.top + box.height));
    line.setAttribute("stroke", "#000000");
    line.setAttribute("class", "axis");
    svg.appendChild(line);

    const label = doc.createElementNS(SVG_NS, "text");
    label.setAttribute("x", x.toFixed(2));
    label.setAttribute("y", String(box.top - 8));
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("font-size", "11");
    label.textContent = fig.axes[i];
    svg.appendChild(label);
  }

  container.replaceChildren(svg);
  return svg;
}

export function highlightedCount(container: Element): number {
  return container.querySelectorAll("polyline.highlighted").length;
}

export function polylineCount(container: Element): number {
  return container.querySelectorAll("polyline.row").length;
}
