// @vitest-environment happy-dom
import { describe, expect, it } from "vitest";

import {
  DEFAULT_VIEW,
  highlightedCount,
  plotBox,
  polylineCount,
  renderParcoords,
} from "../src/parcoords.js";
import type { GroupState, ParcoordsFigure } from "../src/types.js";

function makeFigure(n: number, axes = 4): ParcoordsFigure {
  const rows: number[][] = [];
  for (let r = 0; r < n; r++) {
    rows.push(Array.from({ length: axes }, (_, i) => ((r + 1) * (i + 1)) % 97 / 97));
  }
  return {
    figure: "fig1",
    kind: "parcoords",
    source: "d",
    axes: Array.from({ length: axes }, (_, i) => `v${i}`),
    n,
    ranges: Array.from({ length: axes }, () => [0, 1] as [number, number]),
    rows,
  };
}

describe("renderParcoords", () => {
  it("draws one polyline per row and one axis line per column", () => {
    const container = document.createElement("div");
    renderParcoords(document, container, makeFigure(20), []);
    expect(polylineCount(container)).toBe(20);
    expect(container.querySelectorAll("line.axis")).toHaveLength(4);
    expect(highlightedCount(container)).toBe(0);
  });

  it("labels every axis", () => {
    const container = document.createElement("div");
    renderParcoords(document, container, makeFigure(3), []);
    const labels = [...container.querySelectorAll("text")].map((t) => t.textContent);
    expect(labels).toEqual(["v0", "v1", "v2", "v3"]);
  });

  it("highlighted polylines equal the group size and carry its color", () => {
    const container = document.createElement("div");
    const group: GroupState = {
      id: "g0",
      name: "d_sel",
      rows: [2, 4, 6],
      color: "#1f77b4",
      alpha: 0.5,
    };
    renderParcoords(document, container, makeFigure(10), [group]);
    expect(highlightedCount(container)).toBe(3);
    expect(polylineCount(container)).toBe(10);
    const colored = [...container.querySelectorAll("polyline.highlighted")];
    expect(colored.every((p) => p.getAttribute("stroke") === "#1f77b4")).toBe(true);
    expect(colored.every((p) => p.getAttribute("stroke-opacity") === "0.50")).toBe(true);
  });

  it("skips broken rows entirely", () => {
    const fig = makeFigure(5);
    fig.rows[1][2] = null;
    const container = document.createElement("div");
    renderParcoords(document, container, fig, []);
    expect(polylineCount(container)).toBe(4);
  });

  it("re-render replaces, never accumulates", () => {
    const container = document.createElement("div");
    const fig = makeFigure(8);
    renderParcoords(document, container, fig, []);
    renderParcoords(document, container, fig, []);
    expect(container.querySelectorAll("svg")).toHaveLength(1);
    expect(polylineCount(container)).toBe(8);
  });

  it("plotBox matches the rendered geometry", () => {
    const fig = makeFigure(2);
    const box = plotBox(fig, DEFAULT_VIEW);
    expect(box.left).toBe(DEFAULT_VIEW.margin);
    expect(box.axisCount).toBe(4);
    const container = document.createElement("div");
    renderParcoords(document, container, fig, []);
    const firstAxis = container.querySelector("line.axis")!;
    expect(Number(firstAxis.getAttribute("x1"))).toBeCloseTo(box.left);
  });
});
