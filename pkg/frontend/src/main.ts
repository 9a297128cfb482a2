// Demo wiring: cursor-as-gaze against the live session service.
//
// Left click = trigger, hold right button = grab (baseline), mouse wheel =
// trackpad scroll (baseline), L = lens toggle, N = synthetic noise toggle.
// The sample clock is sample-count based, so the "export trace" button saves
// a stream the offline CLI replays to the exact same event log.

import { DEFAULT_CAMERA, type Viewport } from './camera.js';
import { GazeSampler, type ButtonsState } from './gaze.js';
import { sampleToTraceLine, type SampleRecord, type ServerMessage } from './protocol.js';
import { renderFrame } from './render.js';
import { applyServerMessage, initialState } from './state.js';
import { HttpTransport, MessageQueue } from './transport.js';

const canvas = document.getElementById('scene') as HTMLCanvasElement;
const ctx = canvas.getContext('2d')!;
const vp: Viewport = { width: canvas.width, height: canvas.height };

const taskSelect = document.getElementById('task') as HTMLSelectElement;
const modeSelect = document.getElementById('mode') as HTMLSelectElement;
const noiseBox = document.getElementById('noise') as HTMLInputElement;
const connectBtn = document.getElementById('connect') as HTMLButtonElement;
const exportBtn = document.getElementById('export') as HTMLButtonElement;
const statusEl = document.getElementById('status') as HTMLSpanElement;

const RATE_HZ = 60; // browser tick; the engine accepts any monotone stream

const state = initialState();
let sampler = new GazeSampler(RATE_HZ);
let sentSamples: SampleRecord[] = [];
let cursor: [number, number] = [vp.width / 2, vp.height / 2];
let cursorInside = false;
const buttons: ButtonsState = { trigger: false, grab: false, trackpadDy: 0, lensToggle: false };
let ticker: number | null = null;

const queue = new MessageQueue(
  new HttpTransport(''),
  (msg: ServerMessage) => {
    applyServerMessage(state, msg);
    statusEl.textContent =
      state.connection === 'connected'
        ? `session ${state.sessionId} (${state.config['mode']})`
        : state.lastError ?? 'disconnected';
  },
  (err) => {
    state.connection = 'error';
    state.lastError = `connection lost: ${String(err)}`;
  },
);

function connect() {
  sentSamples = [];
  sampler = new GazeSampler(RATE_HZ);
  sampler.noise.enabled = noiseBox.checked;
  queue.enqueue({
    v: 1,
    kind: 'create_session',
    seq: queue.nextSeq(),
    task: taskSelect.value,
    seed: 0,
    mode: modeSelect.value,
    overrides: taskSelect.value === 'T3' ? { lens_enabled: true } : {},
  });
  if (ticker === null) {
    ticker = window.setInterval(tick, 1000 / RATE_HZ);
  }
}

function tick() {
  if (state.connection !== 'connected' || !state.sessionId || !state.head || !cursorInside) return;
  const rec = sampler.next(cursor, vp, state.head, DEFAULT_CAMERA, { ...buttons });
  buttons.trackpadDy = 0;
  buttons.lensToggle = false;
  sentSamples.push(rec);
  queue.enqueue({ v: 1, kind: 'sample', session_id: state.sessionId, seq: queue.nextSeq(), sample: rec });
}

canvas.addEventListener('pointermove', (e) => {
  const r = canvas.getBoundingClientRect();
  cursor = [e.clientX - r.left, e.clientY - r.top];
  cursorInside = true;
});
canvas.addEventListener('pointerleave', () => {
  cursorInside = false;
});
canvas.addEventListener('pointerdown', (e) => {
  if (e.button === 0) buttons.trigger = true;
  if (e.button === 2) buttons.grab = true;
  e.preventDefault();
});
canvas.addEventListener('pointerup', (e) => {
  if (e.button === 0) buttons.trigger = false;
  if (e.button === 2) buttons.grab = false;
});
canvas.addEventListener('contextmenu', (e) => e.preventDefault());
canvas.addEventListener(
  'wheel',
  (e) => {
    buttons.trackpadDy += e.deltaY / 500; // full flick ~ one trackpad unit
    e.preventDefault();
  },
  { passive: false },
);
window.addEventListener('keydown', (e) => {
  if (e.key === 'l' || e.key === 'L') buttons.lensToggle = true;
  if (e.key === 'n' || e.key === 'N') {
    noiseBox.checked = !noiseBox.checked;
    sampler.noise.enabled = noiseBox.checked;
  }
});
noiseBox.addEventListener('change', () => {
  sampler.noise.enabled = noiseBox.checked;
});
connectBtn.addEventListener('click', connect);

exportBtn.addEventListener('click', () => {
  const blob = new Blob([sentSamples.map(sampleToTraceLine).join('\n') + '\n'], {
    type: 'application/x-ndjson',
  });
  const a = document.createElement('a');
  a.href = URL.createObjectURL(blob);
  a.download = `demo-trace-${taskSelect.value}.jsonl`;
  a.click();
  URL.revokeObjectURL(a.href);
});

function frame() {
  renderFrame(ctx, state, vp, DEFAULT_CAMERA);
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
