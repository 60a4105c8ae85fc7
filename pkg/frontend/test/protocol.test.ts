import { describe, expect, it } from "vitest";

import { dragControl, isTelemetry, parseServerMessage, pauseControl,
         SchemaMismatchError, setModeControl } from "../src/protocol.js";

describe("parseServerMessage", () => {
  it("accepts v1 telemetry", () => {
    const msg = parseServerMessage(JSON.stringify({
      v: 1, type: "telemetry", step: 0, t: 0, mode: "static_ssm",
      zones: { s_a: 799.43, s_b: 1549.43 }, base: [0, 0],
      robot: {}, command: {}, operators: [], cylinders: [], events: [],
    }));
    expect(isTelemetry(msg)).toBe(true);
  });

  it("rejects a schema version mismatch with a dedicated error", () => {
    expect(() => parseServerMessage(JSON.stringify({ v: 2, type: "telemetry" })))
      .toThrow(SchemaMismatchError);
    expect(() => parseServerMessage(JSON.stringify({ type: "telemetry" })))
      .toThrow(SchemaMismatchError);
  });

  it("rejects non-JSON and unknown types", () => {
    expect(() => parseServerMessage("{nope")).toThrow(/non-JSON/);
    expect(() => parseServerMessage(JSON.stringify({ v: 1, type: "mystery" })))
      .toThrow(/unknown server message type/);
    expect(() => parseServerMessage("[1,2,3]")).toThrow(/not an object/);
  });

  it("passes ack and error through", () => {
    const ack = parseServerMessage(JSON.stringify({ v: 1, type: "ack", control: "drag" }));
    expect(ack.type).toBe("ack");
    const err = parseServerMessage(JSON.stringify({ v: 1, type: "error", error: "bad id" }));
    expect(err.type).toBe("error");
  });
});

describe("control builders", () => {
  it("drag carries the schema version and the floor point", () => {
    expect(dragControl(3, [700, -20])).toEqual(
      { v: 1, type: "drag", id: 3, position: [700, -20] });
  });

  it("mode and pause controls", () => {
    expect(setModeControl("dynamic_zones"))
      .toEqual({ v: 1, type: "set_mode", mode: "dynamic_zones" });
    expect(pauseControl(true)).toEqual({ v: 1, type: "pause" });
    expect(pauseControl(false)).toEqual({ v: 1, type: "resume" });
  });
});
