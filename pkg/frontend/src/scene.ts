// Pure scene construction: one telemetry frame in, a display list out.
// Everything stays in world millimetres; draw.ts projects to the canvas.
// No safety math happens here — zones, speeds and stop state are taken
// verbatim from the frame.

import { TelemetryFrame, ZONE_COLORS, Zone } from "./types.js";

export interface CircleShape {
  kind: "circle";
  x: number;
  y: number;
  radius: number;
  fill?: string;
  stroke?: string;
  lineWidth?: number;
  alpha?: number;
  dashed?: boolean;
}

export interface PolylineShape {
  kind: "polyline";
  points: [number, number][];
  stroke: string;
  lineWidth: number;
}

export interface LabelShape {
  kind: "label";
  x: number;
  y: number;
  text: string;
  color: string;
  anchor?: "center" | "left";
}

export interface BadgeShape {
  // screen-anchored status badge (stop indicator, mode, speed)
  kind: "badge";
  slot: number;
  text: string;
  color: string;
  emphasis?: boolean;
}

export type Shape = CircleShape | PolylineShape | LabelShape | BadgeShape;

export interface Scene {
  shapes: Shape[];
  stopped: boolean;
}

const ROBOT_COLOR = "#9ecbff";
const JOINT_COLOR = "#e8f1ff";

function zoneRing(x: number, y: number, radius: number, zone: Zone): CircleShape {
  return {
    kind: "circle",
    x,
    y,
    radius,
    fill: ZONE_COLORS[zone],
    alpha: 0.14,
    stroke: ZONE_COLORS[zone],
    lineWidth: 1.5,
  };
}

/** Build the display list for one frame. Pure; no DOM, no state. */
export function renderFrame(frame: TelemetryFrame): Scene {
  const shapes: Shape[] = [];
  const [bx, by] = frame.base;

  // zone rings, outermost first so the fills stack correctly
  shapes.push(zoneRing(bx, by, frame.zones.s_b, "low_risk"));
  shapes.push(zoneRing(bx, by, frame.zones.s_a, "high_risk"));

  // collision cylinders under the operator markers
  for (const cyl of frame.cylinders) {
    shapes.push({
      kind: "circle",
      x: cyl.center[0],
      y: cyl.center[1],
      radius: cyl.radius,
      stroke: ZONE_COLORS[cyl.zone],
      lineWidth: 1.0,
      dashed: true,
      alpha: 0.8,
    });
  }

  // robot: base -> elbow -> wrist -> tcp, joints as dots
  const links: [number, number][] = [
    [bx, by],
    [frame.robot.elbow[0], frame.robot.elbow[1]],
    [frame.robot.wrist[0], frame.robot.wrist[1]],
    [frame.robot.tcp[0], frame.robot.tcp[1]],
  ];
  shapes.push({ kind: "polyline", points: links, stroke: ROBOT_COLOR, lineWidth: 4 });
  for (const [x, y] of links) {
    shapes.push({ kind: "circle", x, y, radius: 22, fill: JOINT_COLOR, alpha: 0.9 });
  }
  shapes.push({
    kind: "circle",
    x: frame.robot.tcp[0],
    y: frame.robot.tcp[1],
    radius: 30,
    stroke: frame.robot.stopped ? ZONE_COLORS.high_risk : ROBOT_COLOR,
    lineWidth: 2.5,
  });

  // tracked operators, colored by their reported zone
  for (const op of frame.operators) {
    const color = ZONE_COLORS[op.zone];
    shapes.push({
      kind: "circle",
      x: op.position[0],
      y: op.position[1],
      radius: 120,
      fill: color,
      alpha: 0.85,
      stroke: op.id === frame.command.governing ? "#ffffff" : color,
      lineWidth: op.id === frame.command.governing ? 3 : 1,
    });
    shapes.push({
      kind: "label",
      x: op.position[0],
      y: op.position[1],
      text: `#${op.id}`,
      color: "#10151c",
    });
  }

  // status badges: stop state first and loudest
  const stopped = frame.robot.stopped || frame.command.stop;
  if (stopped) {
    shapes.push({
      kind: "badge",
      slot: 0,
      text: "PROTECTIVE STOP",
      color: ZONE_COLORS.high_risk,
      emphasis: true,
    });
  } else if (frame.command.replan) {
    shapes.push({ kind: "badge", slot: 0, text: "REPLANNING", color: "#d98a2b" });
  }
  shapes.push({
    kind: "badge",
    slot: 1,
    text: `speed ${(frame.command.fraction * 100).toFixed(0)}%`,
    color: stopped ? ZONE_COLORS.high_risk : "#c7d4e4",
  });
  shapes.push({ kind: "badge", slot: 2, text: frame.mode, color: "#8fa3ba" });

  return { shapes, stopped };
}

/** Marker color shown for an operator; exposed for tests. */
export function operatorColor(frame: TelemetryFrame, opId: number): string | null {
  for (const shape of renderFrame(frame).shapes) {
    if (shape.kind !== "circle" || shape.fill === undefined) continue;
    const op = frame.operators.find((o) => o.id === opId);
    if (!op) return null;
    if (shape.x === op.position[0] && shape.y === op.position[1] && shape.radius === 120) {
      return shape.fill;
    }
  }
  return null;
}
