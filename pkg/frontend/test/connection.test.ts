import { describe, expect, it, vi } from "vitest";
import { ServiceConnection, SocketLike } from "../src/connection.js";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  onopen: ((ev?: unknown) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  send(data: string) {
    this.sent.push(data);
  }
  close() {
    this.onclose?.();
  }
  serverPush(doc: unknown) {
    this.onmessage?.({ data: JSON.stringify(doc) });
  }
}

describe("ServiceConnection", () => {
  it("requests a snapshot on open and dispatches events by kind", () => {
    const sockets: FakeSocket[] = [];
    const conn = new ServiceConnection("ws://test/ws", {
      factory: () => {
        const s = new FakeSocket();
        sockets.push(s);
        return s;
      },
    });
    const shapes: unknown[] = [];
    conn.on("shape", (ev) => shapes.push(ev));
    conn.connect();
    sockets[0].onopen?.();
    expect(conn.status).toBe("open");
    expect(JSON.parse(sockets[0].sent[0])).toEqual({ kind: "snapshot" });
    sockets[0].serverPush({ kind: "shape", seq: 1, points: [[0, 0, 0], [1, 1, 1]], eta: 0.1, tau: 0 });
    expect(shapes).toHaveLength(1);
  });

  it("reconnects after a drop and reports status", async () => {
    vi.useFakeTimers();
    const sockets: FakeSocket[] = [];
    const conn = new ServiceConnection("ws://test/ws", {
      retryMs: 100,
      factory: () => {
        const s = new FakeSocket();
        sockets.push(s);
        return s;
      },
    });
    const statuses: string[] = [];
    conn.onStatusChange((s) => statuses.push(s));
    conn.connect();
    sockets[0].onopen?.();
    sockets[0].onclose?.();
    expect(conn.status).toBe("closed");
    vi.advanceTimersByTime(150);
    expect(sockets).toHaveLength(2);
    sockets[1].onopen?.();
    expect(conn.status).toBe("open");
    expect(statuses).toEqual(["connecting", "open", "closed", "connecting", "open"]);
    conn.close();
    vi.useRealTimers();
  });

  it("drops commands while disconnected", () => {
    const conn = new ServiceConnection("ws://test/ws", {
      factory: () => new FakeSocket(),
    });
    expect(conn.sendCommand({ delta: { eta: 0.05 } })).toBe(false);
  });

  it("numbers outgoing commands monotonically", () => {
    const sockets: FakeSocket[] = [];
    const conn = new ServiceConnection("ws://test/ws", {
      factory: () => {
        const s = new FakeSocket();
        sockets.push(s);
        return s;
      },
    });
    conn.connect();
    sockets[0].onopen?.();
    conn.sendCommand({ delta: { eta: 0.05 } });
    conn.sendCommand({ set: { eta: 0.5 } });
    const seqs = sockets[0].sent.slice(1).map((s) => JSON.parse(s).seq);
    expect(seqs).toEqual([0, 1]);
  });
});
