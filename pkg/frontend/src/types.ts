// Wire types for the bridge protocol (field names are the wire contract).

export interface SessionDoc {
  dvpId: number;
  endpoints: { eval: string; sse: string; sseReply: string };
  serialization: string;
}

export interface SseEventDoc {
  requestId: number;
  command: string;
  payload: unknown;
}

export interface SceReply {
  status: "ok" | "error";
  payload?: Record<string, unknown>;
}

export interface ParcoordsFigure {
  figure: string;
  kind: "parcoords";
  source: string;
  axes: string[];
  n: number;
  ranges: [number, number][];
  rows: (number | null)[][];
}

export interface SelectionSet {
  figure: string;
  group: string;
  name: string;
  source: string;
  variable: string;
  rows: number[];
  color: string;
  alpha: number;
}

export type QueryDoc =
  | { kind: "axis_interval"; axis: number; lo: number; hi: number; units: "normalized" }
  | { kind: "segment_brush"; pair: number; x: number; ylo: number; yhi: number };

export interface GroupState {
  id: string;
  name: string;
  rows: number[];
  color: string;
  alpha: number;
}
