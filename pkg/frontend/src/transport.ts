// HTTP + event-stream transport. The fetch implementation is injectable so
// tests can fake the wire; the stream parser works on any fetch with
// ReadableStream bodies (browsers and node 20+).

export interface StreamHandle {
  close(): void;
}

export interface Transport {
  getJson(path: string): Promise<unknown>;
  postJson(path: string, body: unknown): Promise<unknown>;
  openStream(
    path: string,
    onEvent: (doc: unknown) => void,
    onClose: () => void,
  ): StreamHandle;
}

export function parseSseChunk(
  buffer: string,
  emit: (doc: unknown) => void,
): string {
  // Frames are "data: <json>\n\n"; anything before an incomplete frame is
  // consumed, the remainder returns as the new buffer.
  let rest = buffer;
  for (;;) {
    const cut = rest.indexOf("\n\n");
    if (cut < 0) {
      return rest;
    }
    const frame = rest.slice(0, cut);
    rest = rest.slice(cut + 2);
    const dataLines = frame
      .split("\n")
      .filter((line) => line.startsWith("data: "))
      .map((line) => line.slice("data: ".length));
    if (dataLines.length > 0) {
      emit(JSON.parse(dataLines.join("\n")));
    }
  }
}

export function httpTransport(
  baseUrl: string,
  fetchImpl: typeof fetch = fetch,
): Transport {
  const base = baseUrl.replace(/\/$/, "");

  async function request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await fetchImpl(`${base}${path}`, init);
    return response.json();
  }

  return {
    getJson(path) {
      return request(path);
    },
    postJson(path, body) {
      return request(path, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
    },
    openStream(path, onEvent, onClose) {
      const controller = new AbortController();
      let closed = false;
      const finish = () => {
        if (!closed) {
          closed = true;
          onClose();
        }
      };
      (async () => {
        try {
          const response = await fetchImpl(`${base}${path}`, {
            signal: controller.signal,
          });
          if (!response.ok || !response.body) {
            finish();
            return;
          }
          const reader = response.body.getReader();
          const decoder = new TextDecoder();
          let buffer = "";
          for (;;) {
            const { done, value } = await reader.read();
            if (done) {
              break;
            }
            buffer += decoder.decode(value, { stream: true });
            buffer = parseSseChunk(buffer, onEvent);
          }
        } catch {
          // aborted or networking error: both end the stream
        }
        finish();
      })();
      return {
        close() {
          closed = true; // do not report an intentional close as a drop
          controller.abort();
        },
      };
    },
  };
}
