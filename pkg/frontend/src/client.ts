// Bridge protocol client: handshake, event stream with exactly-once acks,
// kernel commands, and reconnect-with-fresh-handshake on stream drop.

import type { Transport, StreamHandle } from "./transport.js";
import type { QueryDoc, SceReply, SessionDoc, SseEventDoc } from "./types.js";
import { Store } from "./state.js";

const RECONNECT_DELAY_MS = 500;

export class BridgeError extends Error {
  constructor(
    message: string,
    readonly kind: string = "error",
  ) {
    super(message);
  }
}

export class BridgeClient {
  private dvpId: number | null = null;
  private stream: StreamHandle | null = null;
  private stopped = false;
  private acked = new Set<number>();
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private transport: Transport,
    readonly store: Store,
  ) {}

  get id(): number | null {
    return this.dvpId;
  }

  get ackedRequestIds(): number[] {
    return [...this.acked];
  }

  async connect(): Promise<number> {
    const session = (await this.transport.getJson("/welcome")) as SessionDoc;
    this.dvpId = session.dvpId;
    // requestIds are lifetime-scoped: a server restart can reuse them
    this.acked = new Set();
    await this.postSce({ dvpId: session.dvpId, op: "connect" });
    this.openStream(session);
    this.store.update((state) => ({
      ...state,
      dvpId: session.dvpId,
      connected: true,
    }));
    return session.dvpId;
  }

  private openStream(session: SessionDoc): void {
    this.stream = this.transport.openStream(
      `${session.endpoints.sse}?dvpId=${session.dvpId}`,
      (doc) => this.onEvent(doc as SseEventDoc, session),
      () => this.onStreamClosed(),
    );
  }

  private onEvent(event: SseEventDoc, session: SessionDoc): void {
    if (!this.acked.has(event.requestId)) {
      this.acked.add(event.requestId);
      void this.transport.postJson(session.endpoints.sseReply, {
        requestId: event.requestId,
        dvpId: session.dvpId,
        status: "ok",
        payload: null,
      });
    }
    this.store.dispatchEvent(event);
  }

  private onStreamClosed(): void {
    this.store.update((state) => ({ ...state, connected: false }));
    if (this.stopped) {
      return;
    }
    // dropped stream: reconnect with a fresh handshake
    this.reconnectTimer = setTimeout(() => {
      this.reconnectTimer = null;
      void this.connect().catch(() => this.onStreamClosed());
    }, RECONNECT_DELAY_MS);
  }

  close(): void {
    this.stopped = true;
    if (this.reconnectTimer !== null) {
      clearTimeout(this.reconnectTimer);
      this.reconnectTimer = null;
    }
    this.stream?.close();
    this.stream = null;
  }

  private async postSce(body: Record<string, unknown>): Promise<Record<string, unknown>> {
    const reply = (await this.transport.postJson("/sce", body)) as SceReply;
    if (reply.status !== "ok") {
      const payload = (reply.payload ?? {}) as { kind?: string; message?: string };
      throw new BridgeError(payload.message ?? "request failed", payload.kind);
    }
    return reply.payload ?? {};
  }

  private requireId(): number {
    if (this.dvpId === null) {
      throw new BridgeError("not connected", "protocol");
    }
    return this.dvpId;
  }

  /** Run a brush query in the kernel; the result becomes a named group and an
   * SCE variable, and linked figures hear about it via selection.set. */
  async brushSelect(
    figureId: string,
    source: string,
    query: QueryDoc,
  ): Promise<{ rows: number[]; group: string; color: string; alpha: number }> {
    const payload = await this.postSce({
      dvpId: this.requireId(),
      op: "store",
      name: `${source}_sel`,
      payload: { selection: { figure: figureId, query } },
    });
    return payload as { rows: number[]; group: string; color: string; alpha: number };
  }

  /** Post explicit rows so the computing session sees `<source>_sel`. */
  async sendSelectionToSce(source: string, rows: number[]): Promise<void> {
    await this.postSce({
      dvpId: this.requireId(),
      op: "store",
      name: `${source}_sel`,
      payload: { selection: { source, rows } },
    });
  }

  async evalInSce(expression: string): Promise<unknown> {
    const payload = await this.postSce({
      dvpId: this.requireId(),
      op: "eval",
      payload: expression,
    });
    return payload.value;
  }
}
