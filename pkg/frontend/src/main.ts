// Entry point: wires the service connection, keyboard steering, HUD, and
// the 3-D view together. Configuration comes from URL query parameters:
//   ?endpoint=ws://host:port/ws   service address (default: same host)

import * as THREE from "three";
import { ServiceConnection } from "./connection.js";
import { bindHud, hudFromSnapshot, hudFromStatus } from "./hud.js";
import { KeyboardSteering } from "./input.js";
import { Mailbox } from "./mailbox.js";
import { ShapeEvent } from "./protocol.js";
import { PhantomView } from "./scene3d.js";
import { SessionLog } from "./sessionlog.js";
import { ShapeStore } from "./shapestore.js";

function endpointFromLocation(): string {
  const params = new URLSearchParams(location.search);
  const explicit = params.get("endpoint");
  if (explicit) return explicit;
  const proto = location.protocol === "https:" ? "wss" : "ws";
  return `${proto}://${location.host}/ws`;
}

function start() {
  const canvas = document.getElementById("view") as HTMLCanvasElement;
  const renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
  renderer.setSize(canvas.clientWidth, canvas.clientHeight, false);

  const view = new PhantomView(canvas.clientWidth / canvas.clientHeight);
  const shapes = new Mailbox<{ event: ShapeEvent; raw: string }>();
  const store = new ShapeStore();
  const log = new SessionLog();
  const updateHud = bindHud(document);
  const steering = new KeyboardSteering();
  const reached: Record<string, boolean> = {};

  const conn = new ServiceConnection(endpointFromLocation());
  conn.onStatusChange((s) => {
    document.getElementById("hud-connection")!.textContent = s;
    document.getElementById("hud-connection")!.className = `badge ${s}`;
    document.getElementById("banner")!.hidden = s === "open";
  });
  conn.on("snapshot", (snap) => {
    view.buildFromSnapshot(snap);
    Object.assign(reached, snap.reached);
    updateHud(hudFromSnapshot(snap, conn.status));
  });
  conn.on("status", (status) => {
    updateHud(hudFromStatus(status, reached, conn.status));
  });
  conn.on("shape", (event, raw) => {
    shapes.put({ event, raw });
    log.record(raw);
  });
  conn.on("reach", (ev, raw) => {
    reached[ev.target] = true;
    view.markReached(ev.target);
    log.record(raw);
    toast(`${ev.target} reached (${ev.distance.toFixed(2)} mm)`);
  });
  conn.on("error", (ev) => console.warn("service error:", ev.message));
  conn.connect();

  window.addEventListener("keydown", (ev) => {
    if (ev.repeat) return;
    steering.keyDown(ev.code);
  });
  window.addEventListener("keyup", (ev) => steering.keyUp(ev.code));
  document.getElementById("download-log")!.addEventListener("click", () =>
    log.download(document),
  );

  window.addEventListener("gamepadconnected", () => pollGamepad());
  function pollGamepad() {
    const pad = navigator.getGamepads?.()[0];
    if (pad) {
      steering.setAxis("eta", -(pad.axes[1] ?? 0));
      steering.setAxis("rotation", -(pad.axes[0] ?? 0));
      steering.setAxis("tau", -(pad.axes[3] ?? 0));
    }
  }

  let prev = performance.now();
  function frame(now: number) {
    pollGamepad();
    const cmd = steering.tick(now);
    if (cmd) conn.sendCommand(cmd);

    const latest = shapes.take();
    if (latest) {
      store.accept(latest.event, latest.raw);
      view.renderPolyline(store.points, store.seq);
    }
    view.orbit((now - prev) / 1000);
    prev = now;
    renderer.render(view.scene, view.camera);
    requestAnimationFrame(frame);
  }
  requestAnimationFrame(frame);
}

function toast(text: string) {
  const el = document.getElementById("toast")!;
  el.textContent = text;
  el.classList.add("show");
  setTimeout(() => el.classList.remove("show"), 2500);
}

start();
