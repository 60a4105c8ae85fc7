// Parsing and validation of server messages, plus control-message builders.

import {
  ControlMessage,
  Mode,
  SCHEMA_VERSION,
  ServerMessage,
  TelemetryFrame,
} from "./types.js";

export class SchemaMismatchError extends Error {
  constructor(public readonly got: unknown) {
    super(`telemetry schema v${String(got)} is not v${SCHEMA_VERSION}; refusing to render`);
  }
}

/** Parse one websocket text payload. Throws SchemaMismatchError on a bad `v`. */
export function parseServerMessage(raw: string): ServerMessage {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    throw new Error(`server sent non-JSON payload: ${raw.slice(0, 80)}`);
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new Error("server message is not an object");
  }
  const msg = doc as Record<string, unknown>;
  if (msg.v !== SCHEMA_VERSION) {
    throw new SchemaMismatchError(msg.v);
  }
  const kind = msg.type;
  if (kind !== "telemetry" && kind !== "hello" && kind !== "ack" && kind !== "error") {
    throw new Error(`unknown server message type ${String(kind)}`);
  }
  return msg as unknown as ServerMessage;
}

export function isTelemetry(msg: ServerMessage): msg is TelemetryFrame {
  return msg.type === "telemetry";
}

export function dragControl(id: number, position: [number, number]): ControlMessage {
  return { v: SCHEMA_VERSION, type: "drag", id, position };
}

export function setModeControl(mode: Mode): ControlMessage {
  return { v: SCHEMA_VERSION, type: "set_mode", mode };
}

export function pauseControl(paused: boolean): ControlMessage {
  return { v: SCHEMA_VERSION, type: paused ? "pause" : "resume" };
}

export function resetControl(seed?: number): ControlMessage {
  return seed === undefined
    ? { v: SCHEMA_VERSION, type: "reset" }
    : { v: SCHEMA_VERSION, type: "reset", seed };
}

export function addOperatorControl(
  id: number,
  position: [number, number],
  height = 1700,
): ControlMessage {
  return { v: SCHEMA_VERSION, type: "add_operator", id, position, height };
}

export function removeOperatorControl(id: number): ControlMessage {
  return { v: SCHEMA_VERSION, type: "remove_operator", id };
}
