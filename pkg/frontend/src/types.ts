// Wire types for the v1 telemetry/control schema (docs/telemetry.md).
// The server is authoritative for every safety value shown; the UI renders
// these frames and never derives zones or speeds itself.

export const SCHEMA_VERSION = 1;

export type Zone = "high_risk" | "low_risk" | "safe";

export type Mode = "static_ssm" | "dynamic_zones" | "obstacle_avoidance";

export interface OperatorView {
  id: number;
  position: [number, number];
  height: number;
  zone: Zone;
  distance: number;
}

export interface CylinderView {
  id: number;
  center: [number, number];
  radius: number;
  height: number;
  zone: Zone;
}

export interface RobotView {
  joints: number[];
  elbow: [number, number, number];
  wrist: [number, number, number];
  tcp: [number, number, number];
  speed_fraction: number;
  effective_fraction: number;
  stopped: boolean;
  routine_progress: number;
}

export interface CommandView {
  fraction: number;
  stop: boolean;
  replan: boolean;
  governing: number | null;
}

export interface EventRecord {
  t: number;
  step: number;
  event: string;
  [extra: string]: unknown;
}

export interface TelemetryFrame {
  v: number;
  type: "telemetry";
  step: number;
  t: number;
  mode: Mode;
  zones: { s_a: number; s_b: number };
  base: [number, number];
  robot: RobotView;
  command: CommandView;
  operators: OperatorView[];
  cylinders: CylinderView[];
  events: EventRecord[];
}

export interface HelloMessage {
  v: number;
  type: "hello";
  scenario: string;
  mode: Mode;
}

export interface AckMessage {
  v: number;
  type: "ack";
  control: string;
}

export interface ErrorMessage {
  v: number;
  type: "error";
  error: string;
}

export type ServerMessage = TelemetryFrame | HelloMessage | AckMessage | ErrorMessage;

export type ControlMessage =
  | { v: number; type: "drag"; id: number; position: [number, number] }
  | { v: number; type: "add_operator"; id: number; position: [number, number]; height?: number }
  | { v: number; type: "remove_operator"; id: number }
  | { v: number; type: "set_mode"; mode: Mode }
  | { v: number; type: "pause" }
  | { v: number; type: "resume" }
  | { v: number; type: "reset"; seed?: number };

// Zone palette shared by rings, cylinders and operator markers.
export const ZONE_COLORS: Record<Zone, string> = {
  high_risk: "#d9363e",
  low_risk: "#e6b800",
  safe: "#2e9e44",
};
