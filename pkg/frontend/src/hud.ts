// HUD model: the numbers shown are always the latest status event's
// values, formatted here. Kept separate from the DOM so it can be tested
// headless; bindHud attaches it to elements by id.

import { ConnectionStatus } from "./connection.js";
import { SnapshotEvent, StatusEvent } from "./protocol.js";

export interface HudModel {
  connection: ConnectionStatus;
  eta: string;
  tau: string;
  rotation: string;
  assist: string;
  clamped: string;
  clearance: string;
  targets: Array<{ label: string; distance: string; reached: boolean }>;
}

const fmt = (x: number | null | undefined, digits: number, unit: string) =>
  x === null || x === undefined ? "--" : `${x.toFixed(digits)} ${unit}`;

export function hudFromStatus(
  status: Pick<
    StatusEvent,
    "eta" | "tau" | "rotation" | "assist" | "clamped" | "targets" | "clearance"
  >,
  reached: Record<string, boolean>,
  connection: ConnectionStatus,
): HudModel {
  const targets = Object.entries(status.targets ?? {}).map(([label, d]) => ({
    label,
    distance: fmt(d, 2, "mm"),
    reached: Boolean(reached[label]),
  }));
  targets.sort((a, b) => a.label.localeCompare(b.label));
  return {
    connection,
    eta: status.eta.toFixed(3),
    tau: fmt(status.tau, 3, "N"),
    rotation: `${(status.rotation * 180 / Math.PI).toFixed(1)} deg`,
    assist: status.assist ? "coupled (FTL)" : "manual",
    clamped: status.clamped?.length ? `clamped: ${status.clamped.join(", ")}` : "",
    clearance: fmt(status.clearance, 2, "mm"),
    targets,
  };
}

export function hudFromSnapshot(
  snap: SnapshotEvent,
  connection: ConnectionStatus,
): HudModel {
  return hudFromStatus(snap.state, snap.reached, connection);
}

export function bindHud(doc: Document) {
  const el = (id: string) => doc.getElementById(id);
  return (model: HudModel) => {
    el("hud-connection")!.textContent = model.connection;
    el("hud-connection")!.className = `badge ${model.connection}`;
    el("hud-eta")!.textContent = model.eta;
    el("hud-tau")!.textContent = model.tau;
    el("hud-rotation")!.textContent = model.rotation;
    el("hud-assist")!.textContent = model.assist;
    el("hud-clamped")!.textContent = model.clamped;
    el("hud-clearance")!.textContent = model.clearance;
    const list = el("hud-targets")!;
    list.innerHTML = "";
    for (const t of model.targets) {
      const li = doc.createElement("li");
      li.textContent = `${t.label}: ${t.distance}${t.reached ? "  REACHED" : ""}`;
      if (t.reached) li.className = "reached";
      list.appendChild(li);
    }
  };
}
