// Browser bootstrap: status bar, figure panels, and drag-to-brush wiring.
// Served as static files by the bridge's serve command.

import { BridgeClient } from "./client.js";
import { attachBrush } from "./brush.js";
import { DEFAULT_VIEW, plotBox, renderParcoords } from "./parcoords.js";
import { Store, type UiState } from "./state.js";
import { httpTransport } from "./transport.js";
import type { ParcoordsFigure } from "./types.js";

function toast(message: string): void {
  const el = document.getElementById("toast");
  if (!el) {
    return;
  }
  el.textContent = message;
  el.classList.add("visible");
  setTimeout(() => el.classList.remove("visible"), 4000);
}

function figurePanel(root: Element, figureId: string): Element {
  const id = `figure-${figureId}`;
  let panel = document.getElementById(id);
  if (!panel) {
    panel = document.createElement("div");
    panel.id = id;
    panel.className = "figure-panel";
    root.appendChild(panel);
  }
  return panel;
}

export function startApp(baseUrl: string = ""): BridgeClient {
  const store = new Store();
  const client = new BridgeClient(httpTransport(baseUrl || window.location.origin), store);

  const status = document.getElementById("status");
  const figuresRoot = document.getElementById("figures");
  if (!status || !figuresRoot) {
    throw new Error("missing #status or #figures in the document");
  }

  const render = (state: UiState) => {
    status.textContent = state.connected
      ? `connected, dvpId ${state.dvpId}`
      : "disconnected";
    for (const [figureId, entry] of state.figures) {
      const panel = figurePanel(figuresRoot, figureId);
      const svg = renderParcoords(
        document,
        panel,
        entry.figure,
        entry.groups,
        DEFAULT_VIEW,
      );
      wireBrush(svg, entry.figure);
    }
  };

  const wireBrush = (svg: SVGElement, fig: ParcoordsFigure) => {
    attachBrush(svg, plotBox(fig, DEFAULT_VIEW), (query) => {
      client
        .brushSelect(fig.figure, fig.source, query)
        .then((result) => {
          // linked figures re-render on the selection.set events; this echo
          // covers the brushed figure itself when no stream round trip races
          store.dispatchEvent({
            requestId: -1,
            command: "selection.set",
            payload: {
              figure: fig.figure,
              group: result.group,
              name: `${fig.source}_sel`,
              source: fig.source,
              variable: `${fig.source}_sel`,
              rows: result.rows,
              color: result.color,
              alpha: result.alpha,
            },
          });
        })
        .catch((error) => toast(`selection failed: ${error.message}`));
    });
  };

  store.subscribe(render);
  client.connect().catch((error) => toast(`connect failed: ${error.message}`));
  return client;
}
