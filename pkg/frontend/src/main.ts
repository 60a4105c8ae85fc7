// Entry point: wires the websocket stream, the canvas renderer and the
// control panel together. All safety state shown here comes from telemetry.

import { applyTelemetry, beginDrag, dragRejected, DragState,
         initialDragState, markerPosition } from "./drag.js";
import { paint } from "./draw.js";
import { connectLive, telemetryUrl } from "./net.js";
import { dragControl, isTelemetry, pauseControl, resetControl,
         setModeControl, addOperatorControl } from "./protocol.js";
import { renderFrame } from "./scene.js";
import { Mode, TelemetryFrame, ZONE_COLORS } from "./types.js";
import { fitView, toWorld, Viewport } from "./view.js";

function mustGet<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`element #${id} missing`);
  return el as T;
}

const canvas = mustGet<HTMLCanvasElement>("view");
const maybeCtx = canvas.getContext("2d");
if (!maybeCtx) throw new Error("2D context unavailable");
const ctx: CanvasRenderingContext2D = maybeCtx;

const statusEl = mustGet<HTMLSpanElement>("status");
const bannerEl = mustGet<HTMLDivElement>("banner");
const toastEl = mustGet<HTMLDivElement>("toast");
const modeSelect = mustGet<HTMLSelectElement>("mode");
const pauseBtn = mustGet<HTMLButtonElement>("pause");
const resetBtn = mustGet<HTMLButtonElement>("reset");
const addBtn = mustGet<HTMLButtonElement>("add-op");
const msdEl = mustGet<HTMLDivElement>("msd");
const commandEl = mustGet<HTMLDivElement>("command");

let latest: TelemetryFrame | null = null;
let dragState: DragState = initialDragState();
let view: Viewport | null = null;
let connected = false;
let paused = false;
let halted = false;
let draggingOp: number | null = null;
let lastDragSend = 0;
let addArmed = false;

function toast(text: string): void {
  toastEl.textContent = text;
  toastEl.classList.add("show");
  setTimeout(() => toastEl.classList.remove("show"), 2500);
}

const live = connectLive(telemetryUrl(), {
  onMessage: (msg) => {
    if (isTelemetry(msg)) {
      latest = msg;
      dragState = applyTelemetry(dragState, msg);
      updatePanel(msg);
    } else if (msg.type === "error") {
      dragState = dragRejected(dragState, msg.error);
      toast(msg.error);
    } else if (msg.type === "hello") {
      modeSelect.value = msg.mode;
    }
  },
  onStatus: (up) => {
    connected = up;
    statusEl.textContent = up ? "live" : "disconnected";
    statusEl.className = up ? "ok" : "bad";
    document.body.classList.toggle("offline", !up);
  },
  onSchemaMismatch: (detail) => {
    halted = true;
    bannerEl.textContent = detail;
    bannerEl.classList.add("show");
  },
});

function updatePanel(frame: TelemetryFrame): void {
  msdEl.textContent =
    `S_a ${frame.zones.s_a.toFixed(1)} mm · S_b ${frame.zones.s_b.toFixed(1)} mm`;
  const cmd = frame.command;
  const state = cmd.stop ? "STOP" : `${(cmd.fraction * 100).toFixed(0)}%`;
  const governing = cmd.governing === null ? "-" : `#${cmd.governing}`;
  commandEl.textContent = `speed ${state} · governing ${governing}`;
  commandEl.style.color = cmd.stop ? ZONE_COLORS.high_risk : "";
  if (document.activeElement !== modeSelect) {
    modeSelect.value = frame.mode;
  }
}

// ------------------------------------------------------------------ render

function resize(): void {
  canvas.width = canvas.clientWidth * devicePixelRatio;
  canvas.height = canvas.clientHeight * devicePixelRatio;
}
window.addEventListener("resize", resize);
resize();

function tick(): void {
  if (latest && !halted) {
    const w = canvas.width;
    const h = canvas.height;
    view = fitView(latest, w, h);
    // a live drag ghost overrides the tracked marker position
    const frame = ghosted(latest);
    paint(ctx, renderFrame(frame), view, w, h);
  }
  requestAnimationFrame(tick);
}
requestAnimationFrame(tick);

function ghosted(frame: TelemetryFrame): TelemetryFrame {
  if (!dragState.pending) return frame;
  const operators = frame.operators.map((op) => {
    const pos = markerPosition(dragState, frame, op.id);
    return pos && op.id === dragState.pending!.opId
      ? { ...op, position: [pos[0], pos[1]] as [number, number] }
      : op;
  });
  return { ...frame, operators };
}

// ------------------------------------------------------------- interaction

function canvasWorldPoint(ev: PointerEvent): [number, number] | null {
  if (!view) return null;
  const rect = canvas.getBoundingClientRect();
  const px = (ev.clientX - rect.left) * devicePixelRatio;
  const py = (ev.clientY - rect.top) * devicePixelRatio;
  return toWorld(view, px, py);
}

canvas.addEventListener("pointerdown", (ev) => {
  if (!latest || !connected || halted) return;
  const point = canvasWorldPoint(ev);
  if (!point) return;
  if (addArmed) {
    const used = new Set(latest.operators.map((o) => o.id));
    let id = 1;
    while (used.has(id)) id += 1;
    if (!live.send(addOperatorControl(id, point))) toast("not connected");
    addArmed = false;
    addBtn.classList.remove("armed");
    return;
  }
  for (const op of latest.operators) {
    if (Math.hypot(op.position[0] - point[0], op.position[1] - point[1]) < 200) {
      draggingOp = op.id;
      canvas.setPointerCapture(ev.pointerId);
      break;
    }
  }
});

canvas.addEventListener("pointermove", (ev) => {
  if (draggingOp === null || !latest) return;
  const point = canvasWorldPoint(ev);
  if (!point) return;
  dragState = beginDrag(dragState, draggingOp, point, latest.step);
  const now = performance.now();
  if (now - lastDragSend > 150) {
    lastDragSend = now;
    live.send(dragControl(draggingOp, point));
  }
});

canvas.addEventListener("pointerup", (ev) => {
  if (draggingOp === null) return;
  const point = canvasWorldPoint(ev);
  if (point && latest) {
    dragState = beginDrag(dragState, draggingOp, point, latest.step);
    if (!live.send(dragControl(draggingOp, point))) {
      dragState = dragRejected(dragState, "not connected");
      toast("not connected");
    }
  }
  draggingOp = null;
});

modeSelect.addEventListener("change", () => {
  if (!live.send(setModeControl(modeSelect.value as Mode))) toast("not connected");
});

pauseBtn.addEventListener("click", () => {
  paused = !paused;
  pauseBtn.textContent = paused ? "resume" : "pause";
  if (!live.send(pauseControl(paused))) toast("not connected");
});

resetBtn.addEventListener("click", () => {
  if (!live.send(resetControl())) toast("not connected");
});

addBtn.addEventListener("click", () => {
  addArmed = !addArmed;
  addBtn.classList.toggle("armed", addArmed);
});
