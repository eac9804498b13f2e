// Holds the newest shape exactly as received. The UI never fabricates or
// smooths shapes: whatever polyline gets rendered must be the parsed
// content of a received frame, byte for byte. Keeping the raw frame text
// here makes that invariant checkable.

import { ShapeEvent, Vec3 } from "./protocol.js";

export class ShapeStore {
  rawFrame: string | null = null;
  points: Vec3[] = [];
  seq = -1;
  eta = 0;
  tau = 0;

  accept(event: ShapeEvent, rawFrame: string): void {
    if (event.seq <= this.seq) {
      return; // stale or duplicate
    }
    this.rawFrame = rawFrame;
    this.points = event.points;
    this.seq = event.seq;
    this.eta = event.eta;
    this.tau = event.tau;
  }

  /** The rendered polyline must be the received payload, byte for byte. */
  verifyIntegrity(): boolean {
    if (this.rawFrame === null) {
      return this.points.length === 0;
    }
    const doc = JSON.parse(this.rawFrame);
    return JSON.stringify(doc.points) === JSON.stringify(this.points);
  }
}
