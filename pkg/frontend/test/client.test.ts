import { describe, expect, it, vi } from "vitest";

import { BridgeClient } from "../src/client.js";
import { Store } from "../src/state.js";
import { parseSseChunk, type Transport } from "../src/transport.js";

function fakeTransport() {
  const posts: Array<{ path: string; body: any }> = [];
  let handshakes = 0;
  let emit: ((doc: unknown) => void) | null = null;
  let drop: (() => void) | null = null;

  const transport: Transport = {
    async getJson(path) {
      if (path === "/welcome") {
        handshakes += 1;
        return {
          dvpId: handshakes - 1,
          endpoints: { eval: "/sce", sse: "/sse", sseReply: "/sse-reply" },
          serialization: "json",
        };
      }
      throw new Error(`unexpected GET ${path}`);
    },
    async postJson(path, body) {
      posts.push({ path, body: body as any });
      if (path === "/sce") {
        return { status: "ok", payload: { rows: [1, 2], group: "g0", color: "#111111", alpha: 0.5 } };
      }
      return { status: "ok" };
    },
    openStream(_path, onEvent, onClose) {
      emit = onEvent;
      drop = onClose;
      return { close: () => undefined };
    },
  };
  return {
    transport,
    posts,
    get handshakes() {
      return handshakes;
    },
    emit: (doc: unknown) => emit?.(doc),
    drop: () => drop?.(),
  };
}

describe("parseSseChunk", () => {
  it("emits complete frames and keeps the remainder", () => {
    const seen: unknown[] = [];
    let buffer = parseSseChunk('data: {"a":1}\n\ndata: {"b"', (d) => seen.push(d));
    expect(seen).toEqual([{ a: 1 }]);
    expect(buffer).toBe('data: {"b"');
    buffer = parseSseChunk(buffer + ":2}\n\n", (d) => seen.push(d));
    expect(seen).toEqual([{ a: 1 }, { b: 2 }]);
    expect(buffer).toBe("");
  });

  it("ignores comment-only frames", () => {
    const seen: unknown[] = [];
    const rest = parseSseChunk(": ping\n\n", (d) => seen.push(d));
    expect(seen).toEqual([]);
    expect(rest).toBe("");
  });
});

describe("BridgeClient", () => {
  it("handshakes, connects, and reports the id in state", async () => {
    const fake = fakeTransport();
    const client = new BridgeClient(fake.transport, new Store());
    const id = await client.connect();
    expect(id).toBe(0);
    expect(client.store.snapshot().dvpId).toBe(0);
    expect(client.store.snapshot().connected).toBe(true);
    expect(fake.posts[0]).toEqual({ path: "/sce", body: { dvpId: 0, op: "connect" } });
    client.close();
  });

  it("acks each received requestId exactly once", async () => {
    const fake = fakeTransport();
    const client = new BridgeClient(fake.transport, new Store());
    await client.connect();
    const event = { requestId: 7, command: "figure.add", payload: { kind: "x" } };
    fake.emit(event);
    fake.emit(event); // duplicate delivery must not double-ack
    await Promise.resolve();
    const acks = fake.posts.filter((p) => p.path === "/sse-reply");
    expect(acks).toHaveLength(1);
    expect(acks[0].body).toEqual({
      requestId: 7,
      dvpId: 0,
      status: "ok",
      payload: null,
    });
    expect(client.ackedRequestIds).toEqual([7]);
    client.close();
  });

  it("reconnects with a fresh handshake when the stream drops", async () => {
    vi.useFakeTimers();
    try {
      const fake = fakeTransport();
      const client = new BridgeClient(fake.transport, new Store());
      await client.connect();
      expect(fake.handshakes).toBe(1);
      fake.drop();
      expect(client.store.snapshot().connected).toBe(false);
      await vi.advanceTimersByTimeAsync(600);
      expect(fake.handshakes).toBe(2);
      expect(client.store.snapshot().dvpId).toBe(1);
      expect(client.store.snapshot().connected).toBe(true);
      client.close();
    } finally {
      vi.useRealTimers();
    }
  });

  it("does not reconnect after an intentional close", async () => {
    vi.useFakeTimers();
    try {
      const fake = fakeTransport();
      const client = new BridgeClient(fake.transport, new Store());
      await client.connect();
      client.close();
      fake.drop();
      await vi.advanceTimersByTimeAsync(2000);
      expect(fake.handshakes).toBe(1);
    } finally {
      vi.useRealTimers();
    }
  });

  it("brushSelect posts a selection store against the figure", async () => {
    const fake = fakeTransport();
    const client = new BridgeClient(fake.transport, new Store());
    await client.connect();
    const result = await client.brushSelect("fig1", "d", {
      kind: "axis_interval",
      axis: 1,
      lo: 0.2,
      hi: 0.7,
      units: "normalized",
    });
    expect(result.rows).toEqual([1, 2]);
    const store = fake.posts.find((p) => p.body.op === "store");
    expect(store!.body.name).toBe("d_sel");
    expect(store!.body.payload.selection.figure).toBe("fig1");
    expect(store!.body.payload.selection.query.kind).toBe("axis_interval");
    client.close();
  });

  it("surfaces kernel errors with their kind", async () => {
    const fake = fakeTransport();
    fake.transport.postJson = async (_path, body: any) => {
      if (body.op === "store") {
        return { status: "error", payload: { kind: "unbound", message: "no variable" } };
      }
      return { status: "ok" };
    };
    const client = new BridgeClient(fake.transport, new Store());
    await client.connect();
    await expect(client.sendSelectionToSce("ghost", [1])).rejects.toMatchObject({
      kind: "unbound",
    });
    client.close();
  });
});
