import { describe, expect, it } from "vitest";

import {
  AXIS_HIT_TOLERANCE_PX,
  axisPixelX,
  dragToQuery,
  locateX,
  pixelToNormalizedY,
  type PlotBox,
} from "../src/brush.js";

const box: PlotBox = { left: 40, top: 40, width: 720, height: 420, axisCount: 4 };

describe("axis positions", () => {
  it("spreads axes across the plot width", () => {
    expect(axisPixelX(box, 0)).toBe(40);
    expect(axisPixelX(box, 3)).toBe(760);
    expect(axisPixelX(box, 1)).toBeCloseTo(280);
  });
});

describe("y mapping", () => {
  it("inverts and clamps", () => {
    expect(pixelToNormalizedY(box, box.top)).toBe(1);
    expect(pixelToNormalizedY(box, box.top + box.height)).toBe(0);
    expect(pixelToNormalizedY(box, box.top + box.height / 2)).toBeCloseTo(0.5);
    expect(pixelToNormalizedY(box, -100)).toBe(1);
    expect(pixelToNormalizedY(box, 10_000)).toBe(0);
  });
});

describe("locateX", () => {
  it("hits an axis within tolerance", () => {
    const x = axisPixelX(box, 1);
    expect(locateX(box, x)).toEqual({ kind: "axis", axis: 1 });
    expect(locateX(box, x + AXIS_HIT_TOLERANCE_PX)).toEqual({ kind: "axis", axis: 1 });
  });

  it("maps between axes to pair plus fraction", () => {
    const x0 = axisPixelX(box, 0);
    const x1 = axisPixelX(box, 1);
    const hit = locateX(box, (x0 + x1) / 2);
    expect(hit).not.toBeNull();
    expect(hit!.kind).toBe("between");
    if (hit!.kind === "between") {
      expect(hit!.pair).toBe(0);
      expect(hit!.x).toBeCloseTo(0.5);
    }
  });

  it("rejects positions outside the plot", () => {
    expect(locateX(box, 0)).toBeNull();
    expect(locateX(box, 5000)).toBeNull();
  });
});

describe("dragToQuery", () => {
  it("drag along an axis becomes a normalized interval query", () => {
    const x = axisPixelX(box, 2);
    const q = dragToQuery(box, {
      startX: x,
      startY: box.top + box.height, // normalized 0
      endX: x + 2,
      endY: box.top + box.height / 2, // normalized 0.5
    });
    expect(q).toEqual({
      kind: "axis_interval",
      axis: 2,
      lo: 0,
      hi: 0.5,
      units: "normalized",
    });
  });

  it("orders the interval regardless of drag direction", () => {
    const x = axisPixelX(box, 0);
    const down = dragToQuery(box, { startX: x, startY: 100, endX: x, endY: 300 });
    const up = dragToQuery(box, { startX: x, startY: 300, endX: x, endY: 100 });
    expect(down).toEqual(up);
  });

  it("drag between axes becomes a segment brush", () => {
    const px = (axisPixelX(box, 1) + axisPixelX(box, 2)) / 2;
    const q = dragToQuery(box, { startX: px, startY: 200, endX: px, endY: 260 });
    expect(q).not.toBeNull();
    expect(q!.kind).toBe("segment_brush");
    if (q!.kind === "segment_brush") {
      expect(q!.pair).toBe(1);
      expect(q!.x).toBeGreaterThan(1);
      expect(q!.x).toBeLessThan(2);
      expect(q!.ylo).toBeLessThanOrEqual(q!.yhi);
    }
  });

  it("keeps the probe strictly inside the band", () => {
    // just past the tolerance ring of axis 1
    const px = axisPixelX(box, 1) + AXIS_HIT_TOLERANCE_PX + 1;
    const q = dragToQuery(box, { startX: px, startY: 100, endX: px, endY: 120 });
    if (q && q.kind === "segment_brush") {
      expect(q.x).toBeGreaterThan(q.pair);
      expect(q.x).toBeLessThan(q.pair + 1);
    } else {
      throw new Error("expected a segment brush");
    }
  });

  it("returns null for a drag outside the plot", () => {
    expect(dragToQuery(box, { startX: 2, startY: 50, endX: 2, endY: 80 })).toBeNull();
  });
});
