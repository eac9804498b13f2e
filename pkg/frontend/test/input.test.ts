import { describe, expect, it } from "vitest";
import { KeyboardSteering } from "../src/input.js";
import { Mailbox } from "../src/mailbox.js";

function integrate(steering: KeyboardSteering, ms: number, stepMs = 16) {
  const out: any[] = [];
  for (let t = 0; t <= ms; t += stepMs) {
    const cmd = steering.tick(t);
    if (cmd) out.push(cmd);
  }
  return out;
}

describe("KeyboardSteering", () => {
  it("held insertion key for 1 s advances eta by the configured rate", () => {
    const s = new KeyboardSteering({ eta: 0.05, rotation: 0.8, tau: 0.25 }, 50);
    s.tick(0);
    s.keyDown("KeyW");
    // run a little past 1 s so the last cadence window flushes; the
    // integrated amount tracks rate * hold time to within one window
    const cmds = integrate(s, 1050, 10);
    const total = cmds.reduce((acc, c) => acc + (c.delta?.eta ?? 0), 0);
    expect(total).toBeGreaterThan(0.05 - 0.004);
    expect(total).toBeLessThan(0.055);
  });

  it("rate-limits command emission to the cadence", () => {
    const s = new KeyboardSteering(undefined, 50);
    s.tick(0);
    s.keyDown("KeyW");
    const cmds = integrate(s, 1000, 5);
    // 1 s at a 50 ms cadence: about 20 messages, never more
    expect(cmds.length).toBeLessThanOrEqual(21);
    expect(cmds.length).toBeGreaterThanOrEqual(18);
  });

  it("assist toggle emits a set command and suppresses rotation deltas", () => {
    const s = new KeyboardSteering(undefined, 50);
    s.tick(0);
    expect(s.assist).toBe(true);
    s.keyDown("KeyA"); // rotation key while coupled: ignored
    let cmds = integrate(s, 500);
    expect(cmds.every((c) => !c.delta?.rotation)).toBe(true);

    s.keyDown("KeyT"); // manual mode
    expect(s.assist).toBe(false);
    const toggle = s.tick(501);
    expect(toggle?.set).toEqual({ assist: false });
    cmds = integrate(s, 1200);
    const rot = cmds.reduce((acc, c) => acc + (c.delta?.rotation ?? 0), 0);
    expect(rot).toBeGreaterThan(0);
  });

  it("opposing keys cancel", () => {
    const s = new KeyboardSteering(undefined, 50);
    s.tick(0);
    s.keyDown("KeyW");
    s.keyDown("KeyS");
    const cmds = integrate(s, 500);
    const total = cmds.reduce((acc, c) => acc + (c.delta?.eta ?? 0), 0);
    expect(total).toBeCloseTo(0, 9);
  });

  it("gamepad axis scales the configured rate", () => {
    const s = new KeyboardSteering({ eta: 0.05, rotation: 0.8, tau: 0.25 }, 50);
    s.tick(0);
    s.setAxis("tau", 0.5);
    const cmds = integrate(s, 1050, 10);
    const total = cmds.reduce((acc, c) => acc + (c.delta?.tau ?? 0), 0);
    expect(total).toBeGreaterThan(0.125 - 0.01);
    expect(total).toBeLessThan(0.14);
  });
});

describe("Mailbox", () => {
  it("latest value wins, take empties", () => {
    const box = new Mailbox<number>();
    expect(box.take()).toBeNull();
    box.put(1);
    box.put(2);
    box.put(3);
    expect(box.take()).toBe(3);
    expect(box.take()).toBeNull();
  });
});
