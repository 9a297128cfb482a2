// Thin-client view state: everything here is a verbatim projection of
// ServerMessages. No interaction logic happens on the client; a mock server
// can drive the whole state machine in tests.

import type {
  EventRecord,
  LensRegionRecord,
  PanelSnapshot,
  PoseDict,
  ServerMessage,
} from './protocol.js';

export type PanelView = PanelSnapshot;

export interface DemoViewState {
  connection: 'idle' | 'connected' | 'error';
  sessionId: string | null;
  config: Record<string, unknown>;
  head: PoseDict | null;
  panels: Map<string, PanelView>;
  lens: LensRegionRecord | null;
  dwell: { lens: number; scroll: number; cycle: number };
  events: EventRecord[];
  lastError: string | null;
}

export function initialState(): DemoViewState {
  return {
    connection: 'idle',
    sessionId: null,
    config: {},
    head: null,
    panels: new Map(),
    lens: null,
    dwell: { lens: 0, scroll: 0, cycle: 0 },
    events: [],
    lastError: null,
  };
}

export function applyServerMessage(state: DemoViewState, msg: ServerMessage): DemoViewState {
  switch (msg.kind) {
    case 'session_created': {
      state.connection = 'connected';
      state.sessionId = msg.session_id;
      state.config = msg.scene.config;
      state.head = msg.scene.head;
      state.panels = new Map(msg.scene.panels.map((p) => [p.id, { ...p }]));
      state.lens = null;
      state.events = [];
      state.lastError = null;
      return state;
    }
    case 'events': {
      state.events.push(...msg.events);
      return state;
    }
    case 'scene_delta': {
      for (const delta of msg.panels) {
        const panel = state.panels.get(delta.id);
        if (!panel) continue;
        panel.position = delta.position;
        panel.orientation = delta.orientation;
        panel.z_rank = delta.z_rank;
        panel.scroll_line = delta.scroll_line;
        panel.highlighted = delta.highlighted;
      }
      state.lens = msg.lens;
      state.dwell = msg.dwell;
      state.head = msg.head;
      return state;
    }
    case 'error': {
      state.lastError = `${msg.code}: ${msg.message}`;
      if (msg.code === 'no_session') state.connection = 'error';
      return state;
    }
  }
}

export function visibleLines(panel: PanelView): string[] {
  return panel.lines.slice(panel.scroll_line, panel.scroll_line + panel.visible_lines);
}
