import { describe, expect, it } from 'vitest';
import {
  DEFAULT_CAMERA,
  depthOf,
  panelUvToWorld,
  screenToDirection,
  worldToScreen,
  type Viewport,
} from '../src/camera.js';
import { pointerToGaze, GazeSampler } from '../src/gaze.js';
import type { PoseDict } from '../src/protocol.js';

const vp: Viewport = { width: 960, height: 640 };
const head: PoseDict = { position: [0, 1.4, 0], orientation: [1, 0, 0, 0] };
const noButtons = { trigger: false, grab: false, trackpadDy: 0, lensToggle: false };

describe('screenToDirection', () => {
  it('maps the viewport center to camera forward', () => {
    const d = screenToDirection(480, 320, vp, DEFAULT_CAMERA);
    expect(d[0]).toBeCloseTo(0, 12);
    expect(d[1]).toBeCloseTo(0, 12);
    expect(d[2]).toBeCloseTo(-1, 12);
  });

  it('is unit norm everywhere', () => {
    for (const [px, py] of [[0, 0], [960, 640], [480, 0], [123, 456]] as const) {
      const d = screenToDirection(px, py, vp, DEFAULT_CAMERA);
      expect(Math.hypot(...d)).toBeCloseTo(1, 12);
    }
  });

  it('inverts worldToScreen: the ray passes through the projected point', () => {
    const p: [number, number, number] = [0.3, 1.5, -0.8];
    const screen = worldToScreen(p, head, vp, DEFAULT_CAMERA)!;
    const d = screenToDirection(screen[0], screen[1], vp, DEFAULT_CAMERA);
    // walk the ray to the point's depth and compare
    const t = depthOf(p, head) / -d[2];
    expect(head.position[0] + t * d[0]).toBeCloseTo(p[0], 9);
    expect(head.position[1] + t * d[1]).toBeCloseTo(p[1], 9);
    expect(head.position[2] + t * d[2]).toBeCloseTo(p[2], 9);
  });

  it('points behind the camera are culled', () => {
    expect(worldToScreen([0, 1.4, 1.0], head, vp, DEFAULT_CAMERA)).toBeNull();
  });
});

describe('panelUvToWorld', () => {
  it('maps the uv center to the panel center', () => {
    const p = panelUvToWorld([0.5, 0.5], [0, 1.4, -0.45], [1, 0, 0, 0], 0.6, 0.4);
    expect(p).toEqual([0, 1.4, -0.45]);
  });

  it('v grows downward', () => {
    const top = panelUvToWorld([0.5, 0.0], [0, 1.4, -0.45], [1, 0, 0, 0], 0.6, 0.4);
    const bottom = panelUvToWorld([0.5, 1.0], [0, 1.4, -0.45], [1, 0, 0, 0], 0.6, 0.4);
    expect(top[1]).toBeGreaterThan(bottom[1]);
  });
});

describe('pointerToGaze', () => {
  it('center cursor gives a forward ray from the head', () => {
    const rec = pointerToGaze([480, 320], vp, head, DEFAULT_CAMERA, 0.25, noButtons);
    expect([rec.ox, rec.oy, rec.oz]).toEqual([0, 1.4, 0]);
    expect(rec.dz).toBeCloseTo(-1, 12);
    expect(rec.t).toBe(0.25);
    expect(rec.valid).toBe(true);
  });

  it('sampler timestamps are monotone at the fixed rate', () => {
    const sampler = new GazeSampler(60);
    const ts: number[] = [];
    for (let i = 0; i < 10; i++) {
      ts.push(sampler.next([480, 320], vp, head, DEFAULT_CAMERA, noButtons).t);
    }
    for (let i = 0; i < 10; i++) expect(ts[i]).toBeCloseTo(i / 60, 12);
  });

  it('noise stays unit-norm and is off by default', () => {
    const clean = new GazeSampler(60);
    const rec = clean.next([100, 100], vp, head, DEFAULT_CAMERA, noButtons);
    const noisy = new GazeSampler(60, { enabled: true, biasStdDeg: 0.8, jitterStdDeg: 0.08, biasPeriodS: 1 }, () => 0.42);
    const rec2 = noisy.next([100, 100], vp, head, DEFAULT_CAMERA, noButtons);
    expect(Math.hypot(rec.dx, rec.dy, rec.dz)).toBeCloseTo(1, 12);
    expect(Math.hypot(rec2.dx, rec2.dy, rec2.dz)).toBeCloseTo(1, 12);
  });
});
