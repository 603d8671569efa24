// Single state store: every network callback serializes through applyEvent,
// views re-render from snapshots. The UI computes nothing statistical; it
// only mirrors what the kernel reports.

import type { GroupState, ParcoordsFigure, SelectionSet, SseEventDoc } from "./types.js";

export interface FigureState {
  figure: ParcoordsFigure;
  groups: GroupState[]; // creation order = z-order
}

export interface UiState {
  dvpId: number | null;
  connected: boolean;
  figures: Map<string, FigureState>;
  lastError: string | null;
}

export function initialState(): UiState {
  return { dvpId: null, connected: false, figures: new Map(), lastError: null };
}

function upsertGroup(groups: GroupState[], incoming: GroupState): GroupState[] {
  const existing = groups.findIndex((g) => g.name === incoming.name);
  if (existing >= 0) {
    const next = groups.slice();
    next[existing] = incoming;
    return next;
  }
  return [...groups, incoming];
}

export function applyEvent(state: UiState, event: SseEventDoc): UiState {
  if (event.command === "figure.add") {
    const payload = event.payload as ParcoordsFigure;
    if (payload.kind !== "parcoords") {
      return state; // scene figures render elsewhere; parcoords is the brush surface
    }
    const figures = new Map(state.figures);
    figures.set(payload.figure, { figure: payload, groups: [] });
    return { ...state, figures };
  }
  if (event.command === "selection.set") {
    const payload = event.payload as unknown as SelectionSet;
    const entry = state.figures.get(payload.figure);
    if (!entry) {
      return state;
    }
    const group: GroupState = {
      id: payload.group,
      name: payload.name,
      rows: payload.rows,
      color: payload.color,
      alpha: payload.alpha,
    };
    const figures = new Map(state.figures);
    figures.set(payload.figure, {
      figure: entry.figure,
      groups: upsertGroup(entry.groups, group),
    });
    return { ...state, figures };
  }
  return state;
}

export type Listener = (state: UiState) => void;

export class Store {
  private state: UiState = initialState();
  private listeners = new Set<Listener>();

  snapshot(): UiState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  update(mutate: (state: UiState) => UiState): void {
    this.state = mutate(this.state);
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  dispatchEvent(event: SseEventDoc): void {
    this.update((state) => applyEvent(state, event));
  }
}
