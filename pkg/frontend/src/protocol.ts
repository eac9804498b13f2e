// Wire protocol of the teleop service: JSON text frames over a WebSocket.
// The service guarantees gapless per-session sequence numbers on events.

export type Vec3 = [number, number, number];

export interface ShapeEvent {
  kind: "shape";
  seq: number;
  points: Vec3[];
  eta: number;
  tau: number;
}

export interface StatusEvent {
  kind: "status";
  seq: number;
  eta: number;
  rotation: number;
  tau: number;
  assist: boolean;
  clamped: string[];
  targets: Record<string, number | null>;
  clearance: number | null;
  converged: boolean | null;
}

export interface ReachEvent {
  kind: "reach";
  seq: number;
  target: string;
  distance: number;
}

export interface SceneTarget {
  label: string;
  center: Vec3;
  radius: number;
}

export interface SnapshotEvent {
  kind: "snapshot";
  seq: number;
  scene: {
    cord_axis: [Vec3, Vec3];
    cord_radius: number;
    targets: SceneTarget[];
    entry_position: Vec3;
    entry_axis: Vec3;
  };
  geometry: { r_out: number; L: number };
  tau_max: number;
  state: Omit<StatusEvent, "kind" | "seq">;
  shape: Vec3[] | null;
  reached: Record<string, boolean>;
}

export interface ErrorEvent {
  kind: "error";
  seq?: number;
  message: string;
}

export type ServiceEvent =
  | ShapeEvent
  | StatusEvent
  | ReachEvent
  | SnapshotEvent
  | ErrorEvent;

export interface CommandMessage {
  kind: "command";
  seq?: number;
  set?: { eta?: number; rotation?: number; tau?: number; assist?: boolean };
  delta?: { eta?: number; rotation?: number; tau?: number };
}

const KINDS = new Set(["shape", "status", "reach", "snapshot", "error"]);

function isVec3(x: unknown): x is Vec3 {
  return (
    Array.isArray(x) && x.length === 3 && x.every((c) => typeof c === "number")
  );
}

/** Parse one service frame; returns null (with a console note) if malformed. */
export function parseEvent(text: string): ServiceEvent | null {
  let doc: any;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    console.warn("teleop: dropping non-JSON frame", err);
    return null;
  }
  if (!doc || typeof doc.kind !== "string" || !KINDS.has(doc.kind)) {
    console.warn("teleop: dropping frame with unknown kind", doc?.kind);
    return null;
  }
  if (doc.kind === "shape") {
    if (!Array.isArray(doc.points) || !doc.points.every(isVec3)) {
      console.warn("teleop: dropping malformed shape frame");
      return null;
    }
  }
  if (doc.kind === "reach" && typeof doc.target !== "string") {
    console.warn("teleop: dropping malformed reach frame");
    return null;
  }
  return doc as ServiceEvent;
}
