// Drag interaction state machine, kept pure so it can be unit-tested.
// The server owns positions: an in-flight drag renders as a ghost until the
// next telemetry confirms it (marker snaps to the server's position) or the
// server rejects it (marker reverts, caller shows a toast).

import { TelemetryFrame } from "./types.js";

export interface PendingDrag {
  opId: number;
  target: [number, number];
  sentAtStep: number;
}

export interface DragState {
  pending: PendingDrag | null;
  lastError: string | null;
}

export function initialDragState(): DragState {
  return { pending: null, lastError: null };
}

export function beginDrag(state: DragState, opId: number, target: [number, number],
                          step: number): DragState {
  return { pending: { opId, target, sentAtStep: step }, lastError: null };
}

/** Server rejected the control: drop the ghost, surface the message. */
export function dragRejected(state: DragState, error: string): DragState {
  return { pending: null, lastError: error };
}

/**
 * Fold one telemetry frame in. The drag is confirmed once the tracked
 * estimate has re-converged on the target (the perception pipeline needs a
 * few frames); after that the marker is exactly the server's position.
 */
export function applyTelemetry(state: DragState, frame: TelemetryFrame): DragState {
  if (!state.pending) return state;
  const op = frame.operators.find((o) => o.id === state.pending!.opId);
  if (!op) return state;
  const [tx, ty] = state.pending.target;
  const dist = Math.hypot(op.position[0] - tx, op.position[1] - ty);
  if (dist < 1.0) {
    return { pending: null, lastError: null };
  }
  return state;
}

/** Where the marker for opId should draw: server truth unless a ghost is live. */
export function markerPosition(state: DragState, frame: TelemetryFrame,
                               opId: number): [number, number] | null {
  const op = frame.operators.find((o) => o.id === opId);
  if (state.pending && state.pending.opId === opId) {
    return state.pending.target;
  }
  return op ? op.position : null;
}
