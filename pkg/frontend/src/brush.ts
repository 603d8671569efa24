// Drag-gesture geometry: pixel coordinates -> kernel query documents.
// A drag that starts on (or near) an axis is an interval selection on that
// axis; a drag between two axes probes the segments at the drag's x.

import type { QueryDoc } from "./types.js";

export interface PlotBox {
  left: number; // plot-area pixel bounds (inside the margins)
  top: number;
  width: number;
  height: number;
  axisCount: number;
}

export const AXIS_HIT_TOLERANCE_PX = 8;

export function axisPixelX(box: PlotBox, axis: number): number {
  const span = box.axisCount > 1 ? box.width / (box.axisCount - 1) : 0;
  return box.left + axis * span;
}

/** Inverse of the y scale: pixel -> normalized [0, 1], clamped. */
export function pixelToNormalizedY(box: PlotBox, py: number): number {
  const t = (box.height - (py - box.top)) / box.height;
  return Math.min(1, Math.max(0, t));
}

export type XHit =
  | { kind: "axis"; axis: number }
  | { kind: "between"; pair: number; x: number }
  | null;

export function locateX(box: PlotBox, px: number): XHit {
  if (box.axisCount < 1) {
    return null;
  }
  let nearest = 0;
  let best = Infinity;
  for (let i = 0; i < box.axisCount; i++) {
    const d = Math.abs(px - axisPixelX(box, i));
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  if (best <= AXIS_HIT_TOLERANCE_PX) {
    return { kind: "axis", axis: nearest };
  }
  if (box.axisCount < 2 || px < box.left || px > box.left + box.width) {
    return null;
  }
  const span = box.width / (box.axisCount - 1);
  const u = (px - box.left) / span; // axis units: pair + fraction
  const pair = Math.min(Math.floor(u), box.axisCount - 2);
  return { kind: "between", pair, x: u };
}

export interface DragGesture {
  startX: number;
  startY: number;
  endX: number;
  endY: number;
}

export function dragToQuery(box: PlotBox, drag: DragGesture): QueryDoc | null {
  const hit = locateX(box, drag.startX);
  if (hit === null) {
    return null;
  }
  const y1 = pixelToNormalizedY(box, drag.startY);
  const y2 = pixelToNormalizedY(box, drag.endY);
  const lo = Math.min(y1, y2);
  const hi = Math.max(y1, y2);
  if (hit.kind === "axis") {
    return { kind: "axis_interval", axis: hit.axis, lo, hi, units: "normalized" };
  }
  // keep the probe strictly inside the open inter-axis band
  const epsilon = 1e-6;
  const x = Math.min(hit.pair + 1 - epsilon, Math.max(hit.pair + epsilon, hit.x));
  return { kind: "segment_brush", pair: hit.pair, x, ylo: lo, yhi: hi };
}

/** Wire mousedown/mouseup on a figure's svg into drag queries. */
export function attachBrush(
  svg: Element,
  box: PlotBox,
  onQuery: (query: QueryDoc) => void,
): void {
  let start: { x: number; y: number } | null = null;

  const local = (event: MouseEvent) => {
    const rect = svg.getBoundingClientRect();
    return { x: event.clientX - rect.left, y: event.clientY - rect.top };
  };

  svg.addEventListener("mousedown", (event) => {
    start = local(event as MouseEvent);
  });
  svg.addEventListener("mouseup", (event) => {
    if (!start) {
      return;
    }
    const end = local(event as MouseEvent);
    const query = dragToQuery(box, {
      startX: start.x,
      startY: start.y,
      endX: end.x,
      endY: end.y,
    });
    start = null;
    if (query) {
      onQuery(query);
    }
  });
}
