"""Interactive session state: commands, shape recomputation, reach checks.

A session owns the commanded (eta, base rotation, tension) triple, clamps
incoming commands, recomputes the rod shape on demand, and reports target
reach and cord clearance. It is transport-agnostic: the server feeds it
decoded messages and broadcasts the emitted events. Event sequence
numbers are gapless and strictly increasing per session.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import SolverError
from ..ftl import evaluate_polynomial
from ..geometry import RobotGeometry, section_properties
from ..metrics import Trajectory, nearest_point_distances
from ..statics import LoadCase, Solution, solve_progressive
from .scene import PhantomScene

__all__ = ["TeleopConfig", "TeleopEvent", "TeleopSession"]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TeleopConfig:
    geometry: RobotGeometry
    scene: PhantomScene
    tau_max: float = 1.4
    steps: int = 200
    gravity_enabled: bool = False
    gravity_direction: tuple = (-1.0, 0.0, 0.0)
    # quadratic tension schedule (c2, c1, c0) used when assist is on
    assist_schedule: tuple = (0.0, 0.0, 0.7)


@dataclass
class TeleopEvent:
    seq: int
    kind: str
    payload: dict

    def to_wire(self) -> dict:
        return {"seq": self.seq, "kind": self.kind, **self.payload}


class TeleopSession:
    """One logical robot session driven by incremental commands."""

    def __init__(self, config: TeleopConfig):
        self.config = config
        self.props = section_properties(config.geometry)
        self.eta = 0.0
        self.tau = 0.0
        self.ftl_assist = True
        self.rotation = self._ftl_rotation(0.0)
        self.latest: Solution | None = None
        self.command_version = 0
        self._computed_version = -1
        self._seq = 0
        self._warm = None
        # edge state (tip currently inside) vs sticky reach for snapshots
        self._inside = {t.label: False for t in config.scene.targets}
        self._reached_ever = {t.label: False for t in config.scene.targets}
        if self.ftl_assist:
            self.tau = self._schedule_tau(self.eta)

    # -- events ------------------------------------------------------------

    def _emit(self, kind: str, payload: dict) -> TeleopEvent:
        ev = TeleopEvent(seq=self._seq, kind=kind, payload=payload)
        self._seq += 1
        return ev

    @property
    def dirty(self) -> bool:
        return self._computed_version != self.command_version

    # -- commands ----------------------------------------------------------

    def _ftl_rotation(self, eta: float) -> float:
        return TWO_PI * (eta - 1.0)

    def _schedule_tau(self, eta: float) -> float:
        tau = evaluate_polynomial(self.config.assist_schedule, eta)
        return min(max(tau, 0.0), self.config.tau_max)

    def apply_command(self, set_values: dict | None = None, delta: dict | None = None) -> list[TeleopEvent]:
        """Clamp and store commanded values; emits a status event.

        With assist on, rotation is coupled to eta and tension follows the
        schedule; explicit rotation/tau commands are overridden.
        """
        eta, rot, tau = self.eta, self.rotation, self.tau
        assist = self.ftl_assist
        if set_values:
            eta = float(set_values.get("eta", eta))
            rot = float(set_values.get("rotation", rot))
            tau = float(set_values.get("tau", tau))
            if "assist" in set_values:
                assist = bool(set_values["assist"])
        if delta:
            eta += float(delta.get("eta", 0.0))
            rot += float(delta.get("rotation", 0.0))
            tau += float(delta.get("tau", 0.0))

        clamped = []
        if not 0.0 <= eta <= 1.0:
            eta = min(max(eta, 0.0), 1.0)
            clamped.append("eta")
        if not 0.0 <= tau <= self.config.tau_max:
            tau = min(max(tau, 0.0), self.config.tau_max)
            clamped.append("tau")
        self.ftl_assist = assist
        self.eta = eta
        if assist:
            self.rotation = self._ftl_rotation(eta)
            self.tau = self._schedule_tau(eta)
        else:
            self.rotation = rot
            self.tau = tau
        self.command_version += 1
        return [self._emit("status", self._status_payload(clamped))]

    def _status_payload(self, clamped=()) -> dict:
        report = self._target_report()
        return {
            "eta": self.eta,
            "rotation": self.rotation,
            "tau": self.tau,
            "assist": self.ftl_assist,
            "clamped": list(clamped),
            "command_version": self.command_version,
            "targets": report["targets"],
            "clearance": report["clearance"],
            "converged": None if self.latest is None else bool(self.latest.converged),
        }

    # -- shape -------------------------------------------------------------

    def recompute_shape(self) -> list[TeleopEvent]:
        """Solve at the current commands; emit shape (+reach/status) events.

        A failed solve keeps the previous shape and emits an error event.
        eta = 0 yields an empty shape.
        """
        version = self.command_version
        if self.eta <= 0.0:
            self.latest = None
            self._warm = None
            self._computed_version = version
            events = [self._emit("shape", {"points": [], "eta": 0.0, "tau": self.tau})]
            events.append(self._emit("status", self._status_payload()))
            return events
        load = LoadCase(
            tau=self.tau,
            gravity_enabled=self.config.gravity_enabled,
            gravity_direction=self.config.gravity_direction,
        )
        steps = max(2, round(self.config.steps * self.eta))
        try:
            sol = solve_progressive(
                self.config.geometry,
                load,
                self.eta,
                base_rotation=self.rotation,
                steps=steps,
                initial_guess=self._warm,
            )
        except SolverError as exc:
            return [
                self._emit(
                    "error",
                    {
                        "message": str(exc),
                        "residual_norm": exc.residual_norm,
                        "eta": self.eta,
                        "tau": self.tau,
                    },
                )
            ]
        self.latest = sol
        self._warm = np.concatenate([sol.v[0], sol.u[0]])
        self._computed_version = version
        events = [
            self._emit(
                "shape",
                {
                    "points": [[float(c) for c in row] for row in sol.p],
                    "eta": sol.eta,
                    "tau": sol.tau,
                    "iterations": sol.iterations,
                    "command_version": version,
                },
            )
        ]
        events.extend(self._reach_events())
        events.append(self._emit("status", self._status_payload()))
        return events

    # -- targets -----------------------------------------------------------

    def _target_report(self) -> dict:
        scene = self.config.scene
        report = {"targets": {}, "clearance": None}
        if self.latest is None:
            for t in scene.targets:
                report["targets"][t.label] = None
            return report
        tip = self.latest.tip
        for t in scene.targets:
            report["targets"][t.label] = float(np.linalg.norm(tip - t.center))
        axis = Trajectory(scene.cord_axis)
        d = nearest_point_distances(self.latest.p, axis)
        report["clearance"] = float(
            d.min() - scene.cord_radius - self.config.geometry.r_out
        )
        return report

    def _reach_events(self) -> list[TeleopEvent]:
        events = []
        if self.latest is None:
            return events
        tip = self.latest.tip
        for t in self.config.scene.targets:
            dist = float(np.linalg.norm(tip - t.center))
            inside = dist < t.radius
            if inside and not self._inside[t.label]:
                events.append(
                    self._emit("reach", {"target": t.label, "distance": dist})
                )
                self._reached_ever[t.label] = True
            self._inside[t.label] = inside
        return events

    def evaluate_targets(self) -> dict:
        """Current tip-to-target distances and body-to-cord clearance."""
        return self._target_report()

    # -- snapshot ----------------------------------------------------------

    def snapshot(self) -> TeleopEvent:
        """Full state for newly connected or reconnecting clients."""
        payload = {
            "scene": self.config.scene.to_dict(),
            "geometry": {"r_out": self.config.geometry.r_out, "L": self.config.geometry.L},
            "tau_max": self.config.tau_max,
            "assist_schedule": list(self.config.assist_schedule),
            "gravity_enabled": self.config.gravity_enabled,
            "state": self._status_payload(),
            "shape": None
            if self.latest is None
            else [[float(c) for c in row] for row in self.latest.p],
            "reached": dict(self._reached_ever),
        }
        return self._emit("snapshot", payload)
