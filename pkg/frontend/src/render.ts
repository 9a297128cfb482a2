// Canvas renderer: black background, sans-serif white text, panels with
// 9-line view boxes, green highlight strokes, scroll-button strips with
// dwell-progress bars, and the lens overlay magnifying the region's text.
// Draws exactly what the last scene_delta said; nothing is animated locally.

import {
  DEFAULT_CAMERA,
  depthOf,
  panelUvToWorld,
  scaleAtDepth,
  worldToScreen,
  type CameraOptions,
  type Viewport,
} from './camera.js';
import type { DemoViewState, PanelView } from './state.js';
import { visibleLines } from './state.js';

const COLORS = {
  background: '#000000',
  panel: '#101014',
  panelBorder: '#3a3a44',
  text: '#e8e8ee',
  highlight: '#2ecc40',
  strip: '#1c2430',
  stripActive: '#2e4a68',
  lensBorder: '#f5c542',
  lensBackground: '#15151c',
  hud: '#9a9aa8',
};

function panelScreenRect(
  p: PanelView,
  state: DemoViewState,
  vp: Viewport,
  cam: CameraOptions,
): { x: number; y: number; w: number; h: number } | null {
  const head = state.head!;
  const center = worldToScreen(p.position, head, vp, cam);
  if (!center) return null;
  const s = scaleAtDepth(depthOf(p.position, head), cam);
  const w = p.width * s;
  const h = p.height * s;
  return { x: center[0] - w / 2, y: center[1] - h / 2, w, h };
}

function drawPanel(
  ctx: CanvasRenderingContext2D,
  p: PanelView,
  state: DemoViewState,
  vp: Viewport,
  cam: CameraOptions,
  mode: string,
) {
  const rect = panelScreenRect(p, state, vp, cam);
  if (!rect) return;
  const { x, y, w, h } = rect;
  ctx.fillStyle = COLORS.panel;
  ctx.fillRect(x, y, w, h);

  const strip = mode === 'gaze' ? p.strip_frac * h : 0;
  if (strip > 0) {
    const active = state.dwell.scroll > 0;
    ctx.fillStyle = COLORS.strip;
    ctx.fillRect(x, y, w, strip);
    ctx.fillRect(x, y + h - strip, w, strip);
    if (active) {
      ctx.fillStyle = COLORS.stripActive;
      ctx.fillRect(x, y + h - strip, w * state.dwell.scroll, strip);
      ctx.fillRect(x, y, w * state.dwell.scroll, strip);
    }
    ctx.fillStyle = COLORS.hud;
    ctx.font = `${Math.max(8, strip * 0.6)}px sans-serif`;
    ctx.textAlign = 'center';
    ctx.fillText('▲', x + w / 2, y + strip * 0.75);
    ctx.fillText('▼', x + w / 2, y + h - strip * 0.3);
    ctx.textAlign = 'left';
  }

  const textTop = y + strip;
  const textH = h - 2 * strip;
  const rowH = textH / p.visible_lines;
  const fontPx = Math.max(6, rowH / p.line_spacing);
  ctx.font = `${fontPx}px sans-serif`;
  ctx.fillStyle = COLORS.text;
  const lines = visibleLines(p);
  const charW = w / p.chars_per_line;
  for (let r = 0; r < lines.length; r++) {
    ctx.fillText(lines[r], x + charW * 0.5, textTop + r * rowH + rowH * 0.72, w - charW);
  }

  ctx.lineWidth = p.highlighted ? 3 : 1;
  ctx.strokeStyle = p.highlighted ? COLORS.highlight : COLORS.panelBorder;
  ctx.strokeRect(x, y, w, h);
}

function drawLens(
  ctx: CanvasRenderingContext2D,
  state: DemoViewState,
  vp: Viewport,
  cam: CameraOptions,
) {
  const lens = state.lens;
  if (!lens) return;
  const panel = state.panels.get(lens.panel);
  if (!panel) return;
  const head = state.head!;
  const mag = lens.magnification;

  const center = panelUvToWorld(lens.center_uv, panel.position, panel.orientation, panel.width, panel.height);
  const screen = worldToScreen(center, head, vp, cam);
  if (!screen) return;
  const s = scaleAtDepth(depthOf(panel.position, head), cam);
  const w = lens.width_uv * panel.width * s * mag;
  const h = lens.height_uv * panel.height * s * mag;
  const x = screen[0] - w / 2;
  const y = screen[1] - h / 2;

  ctx.fillStyle = COLORS.lensBackground;
  ctx.fillRect(x, y, w, h);

  // magnified text: the rows and character span under the region
  const strip = panel.strip_frac;
  const textFrac = 1 - 2 * strip;
  const rowFrac = textFrac / panel.visible_lines;
  const v0 = lens.center_uv[1] - lens.height_uv / 2;
  const firstRow = Math.max(0, Math.floor((v0 - strip) / rowFrac));
  const nRows = Math.round(lens.height_uv / rowFrac);
  const u0 = lens.center_uv[0] - lens.width_uv / 2;
  const charFrac = 1 / panel.chars_per_line;
  const firstChar = Math.max(0, Math.floor(u0 / charFrac));
  const nChars = Math.ceil(lens.width_uv / charFrac);

  const rowH = h / Math.max(1, nRows);
  const fontPx = Math.max(8, (rowH / panel.line_spacing) * 0.95);
  ctx.font = `${fontPx}px sans-serif`;
  ctx.fillStyle = COLORS.text;
  const lines = visibleLines(panel);
  for (let r = 0; r < nRows; r++) {
    const row = firstRow + r;
    if (row < 0 || row >= lines.length) continue;
    const slice = lines[row].slice(firstChar, firstChar + nChars);
    ctx.fillText(slice, x + 4, y + r * rowH + rowH * 0.72, w - 8);
  }

  ctx.lineWidth = 2;
  ctx.strokeStyle = COLORS.lensBorder;
  ctx.strokeRect(x, y, w, h);
}

export function renderFrame(
  ctx: CanvasRenderingContext2D,
  state: DemoViewState,
  vp: Viewport,
  cam: CameraOptions = DEFAULT_CAMERA,
): void {
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, vp.width, vp.height);
  if (state.connection !== 'connected' || !state.head) {
    ctx.fillStyle = COLORS.hud;
    ctx.font = '16px sans-serif';
    const msg = state.lastError ?? 'not connected';
    ctx.fillText(msg, 20, 32);
    return;
  }
  const mode = String(state.config['mode'] ?? 'gaze');
  // painter's algorithm: farthest first (camera looks along -Z), ties by rank
  const panels = [...state.panels.values()].sort(
    (a, b) => a.position[2] - b.position[2] || a.z_rank - b.z_rank,
  );
  for (const p of panels) drawPanel(ctx, p, state, vp, cam, mode);
  if (mode === 'gaze') drawLens(ctx, state, vp, cam);

  // HUD: dwell progress for the pending lens activation
  if (mode === 'gaze' && state.dwell.lens > 0 && state.dwell.lens < 1) {
    ctx.strokeStyle = COLORS.lensBorder;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(vp.width - 36, 36, 14, -Math.PI / 2, -Math.PI / 2 + 2 * Math.PI * state.dwell.lens);
    ctx.stroke();
  }
  ctx.fillStyle = COLORS.hud;
  ctx.font = '12px sans-serif';
  ctx.fillText(`mode: ${mode}   events: ${state.events.length}`, 12, vp.height - 12);
}
