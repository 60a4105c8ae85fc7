"""Live telemetry and control over a websocket.

The simulation advances on a wall-clock-paced thread; every step's snapshot
is broadcast to all websocket subscribers as one JSON text message with a
`v` schema version. Control messages arrive on the same socket and are
applied at the next step boundary, so a live drag session is reproducible
as a scripted scenario with the same step-time position overrides.

Message schema (v1) is documented in docs/telemetry.md.
"""

import asyncio
import dataclasses
import json
import threading
import time
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .config import ScenarioConfig
from .monitor import OperationMode
from .simulator import Simulation

__all__ = ["ServeSession", "build_app", "run_server", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1

_MODE_VALUES = {m.value for m in OperationMode}


class ServeSession:
    """Owns the simulation; thread-safe control queue, stepped by one pacer."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.sim = Simulation(config)
        self.paused = False
        self._controls: list = []
        self._lock = threading.Lock()

    # ------------------------------------------------------------- controls

    def submit(self, message) -> dict:
        """Validate a control message; queue it and return an ack, or an error."""
        try:
            control = self._validate(message)
        except (ValueError, KeyError, TypeError) as exc:
            return {"v": SCHEMA_VERSION, "type": "error", "error": str(exc)}
        with self._lock:
            self._controls.append(control)
        return {"v": SCHEMA_VERSION, "type": "ack", "control": control["type"]}

    def _validate(self, msg) -> dict:
        if not isinstance(msg, dict):
            raise ValueError("control message must be a JSON object")
        kind = msg.get("type")
        if kind == "drag":
            return {"type": "drag", "id": _int_field(msg, "id"),
                    "position": _point_field(msg, "position")}
        if kind == "add_operator":
            return {"type": "add_operator", "id": _int_field(msg, "id"),
                    "position": _point_field(msg, "position"),
                    "height": float(msg.get("height", 1700.0))}
        if kind == "remove_operator":
            return {"type": "remove_operator", "id": _int_field(msg, "id")}
        if kind == "set_mode":
            mode = msg.get("mode")
            if mode not in _MODE_VALUES:
                raise ValueError(f"unknown mode {mode!r}")
            return {"type": "set_mode", "mode": mode}
        if kind in ("pause", "resume"):
            return {"type": kind}
        if kind == "reset":
            seed = msg.get("seed")
            if seed is not None and not isinstance(seed, int):
                raise ValueError("seed must be an integer")
            return {"type": "reset", "seed": seed}
        raise ValueError(f"unknown control type {kind!r}")

    def _apply(self, control: dict) -> None:
        kind = control["type"]
        try:
            if kind == "drag":
                self.sim.drag_operator(control["id"], control["position"])
            elif kind == "add_operator":
                self.sim.add_operator(control["id"], control["position"],
                                      control["height"])
            elif kind == "remove_operator":
                self.sim.remove_operator(control["id"])
            elif kind == "set_mode":
                self.sim.set_mode(OperationMode(control["mode"]))
            elif kind == "pause":
                self.paused = True
            elif kind == "resume":
                self.paused = False
            elif kind == "reset":
                config = self.config
                if control["seed"] is not None:
                    config = dataclasses.replace(config, seed=control["seed"])
                self.sim = Simulation(config)
        except KeyError:
            pass  # target vanished between submit and apply; drop silently

    # ------------------------------------------------------------- stepping

    def step(self) -> dict:
        """Apply queued controls at the boundary, advance, return the snapshot."""
        with self._lock:
            pending, self._controls = self._controls, []
        for control in pending:
            self._apply(control)
        if not self.paused:
            self.sim.step()
        return self.sim.snapshot()


def _int_field(msg, key) -> int:
    value = msg.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{key} must be an integer")
    return value


def _point_field(msg, key) -> tuple:
    value = msg.get(key)
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(c, (int, float)) for c in value)):
        raise ValueError(f"{key} must be [x, y]")
    return (float(value[0]), float(value[1]))


def build_app(session: ServeSession, ui_dir: Optional[str] = None):
    """FastAPI app exposing /state, /ws, and optionally the built UI at /."""
    app = FastAPI(title="ssmsim telemetry")
    app.state.session = session
    app.state.subscribers = set()
    app.state.loop = None

    @app.get("/state")
    def state() -> dict:
        return session.sim.snapshot()

    @app.websocket("/ws")
    async def ws(websocket: WebSocket) -> None:
        await websocket.accept()
        app.state.loop = asyncio.get_running_loop()
        outbox: asyncio.Queue = asyncio.Queue(maxsize=240)
        app.state.subscribers.add(outbox)
        await outbox.put(json.dumps({
            "v": SCHEMA_VERSION, "type": "hello",
            "scenario": session.config.scenario_id,
            "mode": session.sim.mode.value,
        }))

        async def pump() -> None:
            while True:
                await websocket.send_text(await outbox.get())

        sender = asyncio.create_task(pump())
        try:
            while True:
                raw = await websocket.receive_text()
                try:
                    message = json.loads(raw)
                except json.JSONDecodeError as exc:
                    reply = {"v": SCHEMA_VERSION, "type": "error",
                             "error": f"invalid JSON: {exc}"}
                else:
                    reply = session.submit(message)
                await outbox.put(json.dumps(reply))
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            app.state.subscribers.discard(outbox)

    if ui_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def broadcast(app, snapshot: dict) -> None:
    """Push one snapshot to all subscribers from the pacing thread."""
    loop = app.state.loop
    if loop is None or loop.is_closed():
        return
    text = json.dumps(snapshot, separators=(",", ":"))

    def push() -> None:
        for outbox in list(app.state.subscribers):
            if outbox.full():
                try:
                    outbox.get_nowait()  # drop the oldest frame, keep latest
                except asyncio.QueueEmpty:
                    pass
            try:
                outbox.put_nowait(text)
            except asyncio.QueueFull:
                pass

    loop.call_soon_threadsafe(push)


def run_server(config: ScenarioConfig, host: str = "127.0.0.1", port: int = 8787,
               realtime_factor: float = 1.0, ui_dir: Optional[str] = None) -> None:
    """Blocking entry point: paced stepping thread plus uvicorn."""
    import uvicorn

    if realtime_factor <= 0:
        raise ValueError("realtime_factor must be > 0")
    session = ServeSession(config)
    app = build_app(session, ui_dir=ui_dir)
    stop = threading.Event()

    def pace() -> None:
        period = config.dt / realtime_factor
        next_tick = time.monotonic() + period
        while not stop.is_set():
            snapshot = session.step()
            broadcast(app, snapshot)
            delay = next_tick - time.monotonic()
            if delay > 0:
                time.sleep(delay)
                next_tick += period
            else:
                next_tick = time.monotonic() + period

    pacer = threading.Thread(target=pace, daemon=True, name="ssmsim-pacer")

    @app.on_event("startup")
    async def _start() -> None:
        pacer.start()

    @app.on_event("shutdown")
    async def _stop() -> None:
        stop.set()

    uvicorn.run(app, host=host, port=port, log_level="warning")
