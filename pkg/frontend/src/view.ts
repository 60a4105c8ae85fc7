// World (mm, y up) <-> screen (px, y down) mapping. The view is fitted once
// per frame so the zone rings and all operators stay in sight.

import { TelemetryFrame } from "./types.js";

export interface Viewport {
  scale: number; // px per mm
  cx: number;    // screen x of world origin
  cy: number;    // screen y of world origin
}

const MARGIN_PX = 24;

/** Fit the outer zone ring plus every operator into the canvas. */
export function fitView(frame: TelemetryFrame, width: number, height: number): Viewport {
  const [bx, by] = frame.base;
  let extent = frame.zones.s_b * 1.15;
  for (const op of frame.operators) {
    const dx = Math.abs(op.position[0] - bx);
    const dy = Math.abs(op.position[1] - by);
    extent = Math.max(extent, Math.hypot(dx, dy) + 240);
  }
  const scale = Math.min(
    (width - 2 * MARGIN_PX) / (2 * extent),
    (height - 2 * MARGIN_PX) / (2 * extent),
  );
  return {
    scale,
    cx: width / 2 - bx * scale,
    cy: height / 2 + by * scale,
  };
}

export function toScreen(view: Viewport, x: number, y: number): [number, number] {
  return [view.cx + x * view.scale, view.cy - y * view.scale];
}

export function toWorld(view: Viewport, px: number, py: number): [number, number] {
  return [(px - view.cx) / view.scale, (view.cy - py) / view.scale];
}
