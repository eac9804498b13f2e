// Keyboard steering: held keys integrate into rate-limited delta commands.
// Insertion W/S, rotation A/D (ignored while assist couples it), tension
// R/F, T toggles follow-the-leader assist. A gamepad can feed the same
// axes through setAxis().

export interface SteeringRates {
  eta: number; // progression per second
  rotation: number; // rad per second
  tau: number; // N per second
}

export const DEFAULT_RATES: SteeringRates = { eta: 0.05, rotation: 0.8, tau: 0.25 };

export interface SteeringCommand {
  set?: { assist: boolean };
  delta?: { eta?: number; rotation?: number; tau?: number };
}

const KEY_AXES: Record<string, [keyof SteeringRates, number]> = {
  KeyW: ["eta", +1],
  KeyS: ["eta", -1],
  KeyA: ["rotation", +1],
  KeyD: ["rotation", -1],
  KeyR: ["tau", +1],
  KeyF: ["tau", -1],
};

export class KeyboardSteering {
  assist = true;
  private rates: SteeringRates;
  private cadenceMs: number;
  private held = new Set<string>();
  private axes = { eta: 0, rotation: 0, tau: 0 };
  private lastTick: number | null = null;
  private lastSent = -Infinity;
  private pendingToggle = false;

  constructor(rates: SteeringRates = DEFAULT_RATES, cadenceMs = 50) {
    this.rates = rates;
    this.cadenceMs = cadenceMs;
  }

  keyDown(code: string): void {
    if (code === "KeyT") {
      this.assist = !this.assist;
      this.pendingToggle = true;
      return;
    }
    if (code in KEY_AXES) this.held.add(code);
  }

  keyUp(code: string): void {
    this.held.delete(code);
  }

  /** Gamepad bridge: axis value in [-1, 1] scales the configured rate. */
  setAxis(axis: keyof SteeringRates, value: number): void {
    this.axes[axis] = Math.max(-1, Math.min(1, value));
  }

  /**
   * Advance to time `now` (ms) and emit at most one command. Held keys
   * accumulate between emissions, so the integrated rate is exact no
   * matter the cadence.
   */
  tick(now: number): SteeringCommand | null {
    if (this.lastTick === null) this.lastTick = now;
    const dt = (now - this.lastTick) / 1000;
    this.lastTick = now;

    const delta = { eta: 0, rotation: 0, tau: 0 };
    for (const code of this.held) {
      const [axis, sign] = KEY_AXES[code];
      delta[axis] += sign * this.rates[axis] * dt;
    }
    for (const axis of ["eta", "rotation", "tau"] as const) {
      delta[axis] += this.axes[axis] * this.rates[axis] * dt;
    }
    if (this.assist) delta.rotation = 0; // service couples it anyway
    this.accum.eta += delta.eta;
    this.accum.rotation += delta.rotation;
    this.accum.tau += delta.tau;

    if (this.pendingToggle) {
      this.pendingToggle = false;
      this.lastSent = now;
      return { set: { assist: this.assist }, delta: this.flushAccum() };
    }
    if (now - this.lastSent < this.cadenceMs) return null;
    const out = this.flushAccum();
    if (!out) return null;
    this.lastSent = now;
    return { delta: out };
  }

  private accum = { eta: 0, rotation: 0, tau: 0 };

  private flushAccum(): { eta?: number; rotation?: number; tau?: number } | undefined {
    const out: { eta?: number; rotation?: number; tau?: number } = {};
    let any = false;
    for (const axis of ["eta", "rotation", "tau"] as const) {
      if (this.accum[axis] !== 0) {
        out[axis] = this.accum[axis];
        this.accum[axis] = 0;
        any = true;
      }
    }
    return any ? out : undefined;
  }
}
