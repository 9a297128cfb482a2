// Desk-scale pinhole view of the 3D scene: the virtual camera sits at the
// head looking along world -Z with +Y up. A cursor pixel maps to exactly one
// gaze direction, so whatever the mouse visibly points at is what the gaze
// ray hits, independent of panel depth. Panels render as billboards (center
// projected, size scaled by 1/depth), which is exact once they snap to face
// the camera and close enough for the semicircle.

import type { PoseDict, Quat, Vec3 } from './protocol.js';

export interface Viewport {
  width: number;
  height: number;
}

export interface CameraOptions {
  focalPx: number; // pixels per meter at 1 m depth
}

export const DEFAULT_CAMERA: CameraOptions = { focalPx: 420 };

/** Depth of a world point along the camera forward (-Z); positive = ahead. */
export function depthOf(p: Vec3, head: PoseDict): number {
  return head.position[2] - p[2];
}

export function worldToScreen(
  p: Vec3,
  head: PoseDict,
  vp: Viewport,
  cam: CameraOptions,
): [number, number] | null {
  const dz = depthOf(p, head);
  if (dz < 0.01) return null;
  const sx = vp.width / 2 + (cam.focalPx * (p[0] - head.position[0])) / dz;
  const sy = vp.height / 2 - (cam.focalPx * (p[1] - head.position[1])) / dz;
  return [sx, sy];
}

/** Pixels per meter for geometry at the given depth. */
export function scaleAtDepth(dz: number, cam: CameraOptions): number {
  return cam.focalPx / Math.max(dz, 0.01);
}

/** Gaze direction through a cursor pixel (unit, camera forward is -Z). */
export function screenToDirection(
  px: number,
  py: number,
  vp: Viewport,
  cam: CameraOptions,
): Vec3 {
  return normalize([(px - vp.width / 2) / cam.focalPx, -(py - vp.height / 2) / cam.focalPx, -1]);
}

export function normalize(v: Vec3): Vec3 {
  const n = Math.hypot(v[0], v[1], v[2]);
  if (n < 1e-12) throw new Error('cannot normalize a zero vector');
  return [v[0] / n, v[1] / n, v[2] / n];
}

export function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

export function rotate(q: Quat, v: Vec3): Vec3 {
  const [w, x, y, z] = q;
  // t = 2 * (u x v); v' = v + w t + u x t
  const tx = 2 * (y * v[2] - z * v[1]);
  const ty = 2 * (z * v[0] - x * v[2]);
  const tz = 2 * (x * v[1] - y * v[0]);
  return [
    v[0] + w * tx + (y * tz - z * ty),
    v[1] + w * ty + (z * tx - x * tz),
    v[2] + w * tz + (x * ty - y * tx),
  ];
}

export function panelAxes(q: Quat): { right: Vec3; up: Vec3; normal: Vec3 } {
  return {
    right: rotate(q, [1, 0, 0]),
    up: rotate(q, [0, 1, 0]),
    normal: rotate(q, [0, 0, 1]),
  };
}

// World point of a panel uv (uv origin top-left, v growing downward).
export function panelUvToWorld(
  uv: [number, number],
  position: Vec3,
  orientation: Quat,
  width: number,
  height: number,
): Vec3 {
  const { right, up } = panelAxes(orientation);
  const du = (uv[0] - 0.5) * width;
  const dv = (0.5 - uv[1]) * height;
  return [
    position[0] + du * right[0] + dv * up[0],
    position[1] + du * right[1] + dv * up[1],
    position[2] + du * right[2] + dv * up[2],
  ];
}
