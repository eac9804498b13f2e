// three.js scene: phantom cord, reach targets, outer-tube stub, and the
// live rod swept as a tube along the received polyline. Geometry helpers
// are exported separately so they can be tested without a renderer.

import * as THREE from "three";
import { SnapshotEvent, Vec3 } from "./protocol.js";

/** Exact polyline curve: piecewise-linear, no smoothing or resampling. */
export class PolylineCurve extends THREE.Curve<THREE.Vector3> {
  private pts: THREE.Vector3[];
  private cum: number[];
  private total: number;

  constructor(points: Vec3[]) {
    super();
    this.pts = points.map((p) => new THREE.Vector3(p[0], p[1], p[2]));
    this.cum = [0];
    for (let i = 1; i < this.pts.length; i++) {
      this.cum.push(this.cum[i - 1] + this.pts[i].distanceTo(this.pts[i - 1]));
    }
    this.total = this.cum[this.cum.length - 1] || 1;
  }

  getPoint(t: number, target = new THREE.Vector3()): THREE.Vector3 {
    const s = Math.max(0, Math.min(1, t)) * this.total;
    let i = 1;
    while (i < this.cum.length - 1 && this.cum[i] < s) i++;
    const s0 = this.cum[i - 1];
    const s1 = this.cum[i];
    const w = s1 > s0 ? (s - s0) / (s1 - s0) : 0;
    return target.copy(this.pts[i - 1]).lerp(this.pts[i], w);
  }
}

export function tubeFromPolyline(points: Vec3[], radius: number): THREE.TubeGeometry {
  const curve = new PolylineCurve(points);
  // one tubular segment per polyline segment keeps the spine on the data
  return new THREE.TubeGeometry(curve, Math.max(1, points.length - 1), radius, 12, false);
}

const TARGET_COLORS: Record<string, number> = {
  lateral: 0x3aa0ff,
  ventral: 0xffb13a,
  drg_left: 0x9a6bff,
  drg_right: 0x6bff9a,
};

export class PhantomView {
  scene = new THREE.Scene();
  camera: THREE.PerspectiveCamera;
  private rodMesh: THREE.Mesh | null = null;
  private tipMarker: THREE.Mesh;
  private targetMeshes = new Map<string, THREE.Mesh>();
  private rodRadius = 0.6;
  lastRenderedSeq = -1;

  constructor(aspect: number) {
    this.camera = new THREE.PerspectiveCamera(45, aspect, 0.1, 1000);
    this.camera.position.set(55, -40, 35);
    this.camera.up.set(0, 0, 1);
    this.scene.background = new THREE.Color(0x10141a);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.55));
    const key = new THREE.DirectionalLight(0xffffff, 1.4);
    key.position.set(40, -60, 80);
    this.scene.add(key);
    this.tipMarker = new THREE.Mesh(
      new THREE.SphereGeometry(0.9, 16, 16),
      new THREE.MeshStandardMaterial({ color: 0xff4040 }),
    );
    this.tipMarker.visible = false;
    this.scene.add(this.tipMarker);
  }

  buildFromSnapshot(snap: SnapshotEvent): void {
    const { cord_axis, cord_radius, targets } = snap.scene;
    this.rodRadius = snap.geometry.r_out;

    const a = new THREE.Vector3(...cord_axis[0]);
    const b = new THREE.Vector3(...cord_axis[1]);
    const mid = a.clone().add(b).multiplyScalar(0.5);
    const dir = b.clone().sub(a);
    const cord = new THREE.Mesh(
      new THREE.CylinderGeometry(cord_radius, cord_radius, dir.length(), 24),
      new THREE.MeshStandardMaterial({ color: 0xd8c9a8, roughness: 0.8 }),
    );
    cord.position.copy(mid);
    cord.quaternion.setFromUnitVectors(
      new THREE.Vector3(0, 1, 0),
      dir.clone().normalize(),
    );
    this.scene.add(cord);

    // outer-tube stub at the entry, pointing along the insertion axis
    const entry = new THREE.Vector3(...snap.scene.entry_position);
    const axis = new THREE.Vector3(...snap.scene.entry_axis).normalize();
    const stub = new THREE.Mesh(
      new THREE.CylinderGeometry(this.rodRadius * 2.2, this.rodRadius * 2.2, 8, 16),
      new THREE.MeshStandardMaterial({ color: 0x707a88, roughness: 0.4 }),
    );
    stub.position.copy(entry.clone().addScaledVector(axis, -4));
    stub.quaternion.setFromUnitVectors(new THREE.Vector3(0, 1, 0), axis);
    this.scene.add(stub);

    for (const t of targets) {
      const mesh = new THREE.Mesh(
        new THREE.SphereGeometry(t.radius, 20, 20),
        new THREE.MeshStandardMaterial({
          color: TARGET_COLORS[t.label] ?? 0xcccccc,
          transparent: true,
          opacity: 0.55,
        }),
      );
      mesh.position.set(...t.center);
      this.scene.add(mesh);
      this.targetMeshes.set(t.label, mesh);
    }
    const lookAt = mid.clone();
    this.camera.lookAt(lookAt);
    for (const [label, reached] of Object.entries(snap.reached)) {
      if (reached) this.markReached(label);
    }
    if (snap.shape && snap.shape.length >= 2) {
      this.renderPolyline(snap.shape, snap.seq);
    }
  }

  /** Swap in the rod tube for a received polyline (never synthesized). */
  renderPolyline(points: Vec3[], seq: number): void {
    if (this.rodMesh) {
      this.scene.remove(this.rodMesh);
      this.rodMesh.geometry.dispose();
      this.rodMesh = null;
    }
    if (points.length < 2) {
      this.tipMarker.visible = false;
      this.lastRenderedSeq = seq;
      return;
    }
    this.rodMesh = new THREE.Mesh(
      tubeFromPolyline(points, this.rodRadius),
      new THREE.MeshStandardMaterial({ color: 0x4fd1c5, roughness: 0.35 }),
    );
    this.scene.add(this.rodMesh);
    const tip = points[points.length - 1];
    this.tipMarker.position.set(tip[0], tip[1], tip[2]);
    this.tipMarker.visible = true;
    this.lastRenderedSeq = seq;
  }

  markReached(label: string): void {
    const mesh = this.targetMeshes.get(label);
    if (!mesh) return;
    const mat = mesh.material as THREE.MeshStandardMaterial;
    mat.opacity = 0.95;
    mat.emissive = new THREE.Color(0x226622);
  }

  orbit(dtSeconds: number): void {
    const r = Math.hypot(this.camera.position.x, this.camera.position.y);
    const ang = Math.atan2(this.camera.position.y, this.camera.position.x)
      + 0.06 * dtSeconds;
    this.camera.position.x = r * Math.cos(ang);
    this.camera.position.y = r * Math.sin(ang);
    this.camera.lookAt(0, 12, 33);
  }
}
