// Cursor-as-gaze: unproject the mouse through the virtual camera to a world
// ray and emit samples on a fixed tick with monotone timestamps (t = i/rate,
// never wall clock, so an exported trace replays deterministically).
//
// The optional synthetic noise mimics the tracker's accuracy band: a bias
// offset of |N(0, 0.8 deg)| resampled once per second plus a small 0.08 deg
// per-sample jitter. Jitter at accuracy scale would trip the saccade filter
// on every sample, so the bias carries most of the magnitude.

import { normalize, screenToDirection, type CameraOptions, type Viewport } from './camera.js';
import type { PoseDict, SampleRecord, Vec3 } from './protocol.js';

export interface ButtonsState {
  trigger: boolean;
  grab: boolean;
  trackpadDy: number; // consumed (reset) each sample
  lensToggle: boolean;
}

export interface NoiseOptions {
  enabled: boolean;
  biasStdDeg: number;
  jitterStdDeg: number;
  biasPeriodS: number;
}

export const DEFAULT_NOISE: NoiseOptions = {
  enabled: false,
  biasStdDeg: 0.8,
  jitterStdDeg: 0.08,
  biasPeriodS: 1.0,
};

export function pointerToGaze(
  cursorPx: [number, number],
  viewport: Viewport,
  head: PoseDict,
  cam: CameraOptions,
  t: number,
  buttons: ButtonsState,
): SampleRecord {
  const d = screenToDirection(cursorPx[0], cursorPx[1], viewport, cam);
  return {
    t,
    ox: head.position[0], oy: head.position[1], oz: head.position[2],
    dx: d[0], dy: d[1], dz: d[2],
    valid: true,
    trigger: buttons.trigger,
    grab: buttons.grab,
    trackpad_dy: buttons.trackpadDy,
    lens_toggle: buttons.lensToggle,
  };
}

function gauss(rng: () => number): number {
  // Box-Muller
  const u = Math.max(rng(), 1e-12);
  const v = rng();
  return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
}

function perturb(d: Vec3, angleDeg: number, phi: number): Vec3 {
  if (angleDeg === 0) return d;
  const helper: Vec3 = Math.abs(d[1]) < 0.9 ? [0, 1, 0] : [1, 0, 0];
  const e1 = normalize([
    d[1] * helper[2] - d[2] * helper[1],
    d[2] * helper[0] - d[0] * helper[2],
    d[0] * helper[1] - d[1] * helper[0],
  ]);
  const e2: Vec3 = [
    d[1] * e1[2] - d[2] * e1[1],
    d[2] * e1[0] - d[0] * e1[2],
    d[0] * e1[1] - d[1] * e1[0],
  ];
  const axis: Vec3 = [
    Math.cos(phi) * e1[0] + Math.sin(phi) * e2[0],
    Math.cos(phi) * e1[1] + Math.sin(phi) * e2[1],
    Math.cos(phi) * e1[2] + Math.sin(phi) * e2[2],
  ];
  const a = (angleDeg * Math.PI) / 180;
  const c = Math.cos(a);
  const s = Math.sin(a);
  const cross: Vec3 = [
    axis[1] * d[2] - axis[2] * d[1],
    axis[2] * d[0] - axis[0] * d[2],
    axis[0] * d[1] - axis[1] * d[0],
  ];
  return normalize([d[0] * c + cross[0] * s, d[1] * c + cross[1] * s, d[2] * c + cross[2] * s]);
}

/** Fixed-rate sampler with monotone t and optional synthetic tracker noise. */
export class GazeSampler {
  private i = 0;
  private biasAngle = 0;
  private biasPhi = 0;
  private nextBiasResample = 0;

  constructor(
    public rateHz: number,
    public noise: NoiseOptions = { ...DEFAULT_NOISE },
    private rng: () => number = Math.random,
  ) {}

  get t(): number {
    return this.i / this.rateHz;
  }

  next(
    cursorPx: [number, number],
    viewport: Viewport,
    head: PoseDict,
    cam: CameraOptions,
    buttons: ButtonsState,
  ): SampleRecord {
    const rec = pointerToGaze(cursorPx, viewport, head, cam, this.i / this.rateHz, buttons);
    this.i += 1;
    if (!this.noise.enabled) return rec;
    if (rec.t >= this.nextBiasResample) {
      this.biasAngle = Math.abs(gauss(this.rng)) * this.noise.biasStdDeg;
      this.biasPhi = this.rng() * 2 * Math.PI;
      this.nextBiasResample = rec.t + this.noise.biasPeriodS;
    }
    let d: Vec3 = [rec.dx, rec.dy, rec.dz];
    d = perturb(d, this.biasAngle, this.biasPhi);
    d = perturb(d, Math.abs(gauss(this.rng)) * this.noise.jitterStdDeg, this.rng() * 2 * Math.PI);
    return { ...rec, dx: d[0], dy: d[1], dz: d[2] };
  }
}
