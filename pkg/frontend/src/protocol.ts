// Session protocol types and NDJSON helpers (one JSON object per line, v:1).
// Mirrors docs/protocol.md; the demo computes no interaction logic itself.

export const PROTOCOL_VERSION = 1;

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number]; // (w, x, y, z)

export interface PoseDict {
  position: Vec3;
  orientation: Quat;
}

export interface SampleRecord {
  t: number;
  ox: number; oy: number; oz: number;
  dx: number; dy: number; dz: number;
  valid: boolean;
  trigger: boolean;
  grab: boolean;
  trackpad_dy: number;
  lens_toggle: boolean;
}

export interface PanelSnapshot {
  id: string;
  position: Vec3;
  orientation: Quat;
  width: number;
  height: number;
  z_rank: number;
  scroll_line: number;
  highlighted: boolean;
  scrollable: boolean;
  strip_frac: number;
  visible_lines: number;
  chars_per_line: number;
  line_spacing: number;
  lines: string[];
}

export interface PanelDelta {
  id: string;
  position: Vec3;
  orientation: Quat;
  z_rank: number;
  scroll_line: number;
  highlighted: boolean;
}

export interface LensRegionRecord {
  panel: string;
  center_uv: [number, number];
  width_uv: number;
  height_uv: number;
  magnification: number;
  camera: PoseDict;
}

export interface EventRecord {
  t: number;
  kind: string;
  [key: string]: unknown;
}

export interface SceneSnapshot {
  head: PoseDict;
  config: Record<string, unknown>;
  panels: PanelSnapshot[];
}

export type ServerMessage =
  | { v: number; kind: 'session_created'; session_id: string; ack_seq: number; scene: SceneSnapshot }
  | { v: number; kind: 'events'; session_id: string; ack_seq: number; events: EventRecord[] }
  | {
      v: number;
      kind: 'scene_delta';
      session_id: string;
      ack_seq: number;
      panels: PanelDelta[];
      lens: LensRegionRecord | null;
      dwell: { lens: number; scroll: number; cycle: number };
      head: PoseDict;
    }
  | { v: number; kind: 'error'; session_id: string | null; ack_seq: number | null; code: string; message: string };

export type ClientMessage =
  | { v: number; kind: 'create_session'; seq: number; task?: string; seed?: number; scenario?: unknown; mode?: string; overrides?: Record<string, unknown> }
  | { v: number; kind: 'sample'; session_id: string; seq: number; sample: SampleRecord }
  | { v: number; kind: 'set_head_pose'; session_id: string; seq: number; position: Vec3; orientation: Quat }
  | { v: number; kind: 'toggle_lens'; session_id: string; seq: number }
  | { v: number; kind: 'end_session'; session_id: string; seq: number };

export function encodeLine(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

export function decodeLines(body: string): ServerMessage[] {
  const out: ServerMessage[] = [];
  for (const line of body.split('\n')) {
    const text = line.trim();
    if (!text) continue;
    out.push(JSON.parse(text) as ServerMessage);
  }
  return out;
}

// Sample records serialized in trace-format field order, so an exported demo
// trace is byte-compatible with the offline CLI.
export function sampleToTraceLine(s: SampleRecord): string {
  return JSON.stringify({
    t: s.t,
    ox: s.ox, oy: s.oy, oz: s.oz,
    dx: s.dx, dy: s.dy, dz: s.dz,
    valid: s.valid,
    trigger: s.trigger,
    grab: s.grab,
    trackpad_dy: s.trackpad_dy,
    lens_toggle: s.lens_toggle,
  });
}
