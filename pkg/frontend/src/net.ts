// Websocket client: reconnecting stream of parsed server messages plus a
// fire-and-confirm control sender. Callbacks run on the browser event loop.

import { parseServerMessage, SchemaMismatchError } from "./protocol.js";
import { ControlMessage, ServerMessage } from "./types.js";

export interface LiveHandlers {
  onMessage: (msg: ServerMessage) => void;
  onStatus: (connected: boolean) => void;
  onSchemaMismatch: (detail: string) => void;
}

export interface LiveConnection {
  send: (control: ControlMessage) => boolean;
  close: () => void;
}

export function connectLive(url: string, handlers: LiveHandlers): LiveConnection {
  let ws: WebSocket | null = null;
  let closed = false;
  let halted = false; // schema mismatch: stop consuming, keep the banner up
  let retryMs = 500;

  const open = () => {
    ws = new WebSocket(url);
    ws.onopen = () => {
      retryMs = 500;
      handlers.onStatus(true);
    };
    ws.onmessage = (ev: MessageEvent<string>) => {
      if (halted) return;
      try {
        handlers.onMessage(parseServerMessage(ev.data));
      } catch (err) {
        if (err instanceof SchemaMismatchError) {
          halted = true;
          handlers.onSchemaMismatch(err.message);
          ws?.close();
          return;
        }
        console.warn("dropping bad server message:", err);
      }
    };
    ws.onclose = () => {
      handlers.onStatus(false);
      if (!closed && !halted) {
        setTimeout(open, retryMs);
        retryMs = Math.min(retryMs * 2, 8000);
      }
    };
    ws.onerror = () => {
      // onclose follows and owns the retry
    };
  };
  open();

  return {
    send: (control: ControlMessage): boolean => {
      if (!ws || ws.readyState !== WebSocket.OPEN) return false;
      ws.send(JSON.stringify(control));
      return true;
    },
    close: () => {
      closed = true;
      ws?.close();
    },
  };
}

/** ws:// URL for the current page origin (or an explicit host:port). */
export function telemetryUrl(base?: string): string {
  const origin = base ?? window.location.origin;
  return origin.replace(/^http/, "ws").replace(/\/$/, "") + "/ws";
}
