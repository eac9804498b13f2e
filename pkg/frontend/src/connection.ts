// WebSocket client for the teleop service: auto-reconnect with a fixed
// backoff, a snapshot request on every (re)open, and per-kind listeners.
// A WebSocket factory can be injected for tests.

import { CommandMessage, parseEvent, ServiceEvent } from "./protocol.js";

export type SocketLike = {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
};

export type SocketFactory = (url: string) => SocketLike;

export type ConnectionStatus = "connecting" | "open" | "closed";

export class ServiceConnection {
  url: string;
  status: ConnectionStatus = "closed";
  private factory: SocketFactory;
  private retryMs: number;
  private socket: SocketLike | null = null;
  private listeners = new Map<string, Array<(ev: any, raw: string) => void>>();
  private statusListeners: Array<(s: ConnectionStatus) => void> = [];
  private stopped = false;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private clientSeq = 0;

  constructor(url: string, opts: { factory?: SocketFactory; retryMs?: number } = {}) {
    this.url = url;
    this.factory =
      opts.factory ?? ((u: string) => new WebSocket(u) as unknown as SocketLike);
    this.retryMs = opts.retryMs ?? 1000;
  }

  on<K extends ServiceEvent["kind"]>(
    kind: K,
    handler: (ev: Extract<ServiceEvent, { kind: K }>, raw: string) => void,
  ): void {
    const list = this.listeners.get(kind) ?? [];
    list.push(handler);
    this.listeners.set(kind, list);
  }

  onStatusChange(handler: (s: ConnectionStatus) => void): void {
    this.statusListeners.push(handler);
  }

  private setStatus(s: ConnectionStatus): void {
    this.status = s;
    for (const h of this.statusListeners) h(s);
  }

  connect(): void {
    this.stopped = false;
    this.open();
  }

  private open(): void {
    this.setStatus("connecting");
    const sock = this.factory(this.url);
    this.socket = sock;
    sock.onopen = () => {
      this.setStatus("open");
      sock.send(JSON.stringify({ kind: "snapshot" }));
    };
    sock.onmessage = (ev) => {
      const raw = String(ev.data);
      const event = parseEvent(raw);
      if (!event) return;
      for (const h of this.listeners.get(event.kind) ?? []) h(event, raw);
    };
    sock.onclose = () => {
      this.socket = null;
      this.setStatus("closed");
      if (!this.stopped) {
        this.retryTimer = setTimeout(() => this.open(), this.retryMs);
      }
    };
    sock.onerror = () => {
      // onclose follows; nothing extra to do
    };
  }

  sendCommand(msg: Omit<CommandMessage, "kind" | "seq">): boolean {
    if (this.status !== "open" || !this.socket) return false;
    const frame: CommandMessage = { kind: "command", seq: this.clientSeq++, ...msg };
    this.socket.send(JSON.stringify(frame));
    return true;
  }

  requestSnapshot(): void {
    this.socket?.send(JSON.stringify({ kind: "snapshot" }));
  }

  close(): void {
    this.stopped = true;
    if (this.retryTimer) clearTimeout(this.retryTimer);
    this.socket?.close();
  }
}
