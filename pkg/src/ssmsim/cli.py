"""Command-line harness: one-shot separation math, scenario runs, reports, serving.

Heavy imports are deferred into the subcommands so `ssmsim msd` stays a
sub-second calculator.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .safety import (Avoidability, Frequency, HazardProperties, PerformanceLevel,
                     Severity, SsmParameters, StandardViolationError, collision_time,
                     compute_zone_boundaries, performance_level)

EXIT_COLLISION = 1
EXIT_CONFIG = 2


@click.group()
def main() -> None:
    """Speed-and-separation-monitoring workspace simulator."""


@main.command()
@click.option("--v-h", default=1600.0, show_default=True, help="Human approach speed, mm/s.")
@click.option("--v-r", default=500.0, show_default=True, help="Robot speed before stop, mm/s.")
@click.option("--t-r", default=0.0283, show_default=True, help="System reaction time, s.")
@click.option("--t-s", default=0.4, show_default=True, help="Robot stop time, s.")
@click.option("--c", "c_intrusion", default=0.0, show_default=True, help="Intrusion distance, mm.")
@click.option("--z-d", default=0.0, show_default=True, help="Robot position uncertainty, mm.")
@click.option("--z-r", default=0.0, show_default=True, help="Operator position uncertainty, mm.")
@click.option("--clearance", default=750.0, show_default=True,
              help="Low-risk band width, mm (>= 500).")
@click.option("--reach", default=662.8, show_default=True,
              help="End-effector reach used for the collision-time margin, mm.")
@click.option("--severity", type=click.Choice(["S1", "S2"]), default="S1", show_default=True)
@click.option("--frequency", type=click.Choice(["F1", "F2"]), default="F2", show_default=True)
@click.option("--avoidability", type=click.Choice(["P1", "P2"]), default="P2", show_default=True)
def msd(v_h, v_r, t_r, t_s, c_intrusion, z_d, z_r, clearance, reach,
        severity, frequency, avoidability) -> None:
    """Print separation distances, collision-time margin and performance level."""
    try:
        params = SsmParameters(v_h=v_h, v_r=v_r, t_r=t_r, t_s=t_s,
                               c_intrusion=c_intrusion, z_d=z_d, z_r=z_r)
        bounds = compute_zone_boundaries(params, clearance)
    except (StandardViolationError, ValueError) as exc:
        raise click.ClickException(str(exc)) from None
    margin = bounds.s_a - reach
    click.echo(f"S_a = {bounds.s_a:.2f} mm   (high-risk boundary)")
    click.echo(f"S_b = {bounds.s_b:.2f} mm   (low-risk boundary, clearance {clearance:.0f} mm)")
    click.echo(f"margin to end effector (reach {reach:.1f} mm) = {margin:.2f} mm")
    if margin > 0 and params.v_h > 0:
        t_coll = collision_time(margin, params.v_h)
        verdict = "reacts in time" if t_coll > params.t_r else "TOO SLOW"
        click.echo(f"t_collision = {t_coll * 1000.0:.1f} ms   "
                   f"(> t_r = {params.t_r * 1000.0:.1f} ms: {verdict})")
    else:
        click.echo("t_collision = n/a (end effector reaches past the stop boundary)")
    hazard = HazardProperties(Severity(severity), Frequency(frequency),
                              Avoidability(avoidability))
    level = performance_level(hazard)
    click.echo(f"required performance level ({severity},{frequency},{avoidability}) = "
               f"{PerformanceLevel(level).name}")


def _load_config_or_exit(config_path, seed, mode):
    from .config import ConfigError, load_scenario

    try:
        config = load_scenario(config_path)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    changes = {}
    if seed is not None:
        changes["seed"] = seed
    if mode is not None:
        from .monitor import OperationMode
        changes["mode"] = OperationMode(mode)
    if changes:
        import dataclasses
        config = dataclasses.replace(config, **changes)
    return config


def _write_outputs(out_dir, events, report) -> None:
    from .metrics import metrics_csv, report_json

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "events.ndjson"), "w", encoding="utf-8") as fh:
        for event in events:
            fh.write(json.dumps(event, separators=(",", ":")) + "\n")
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(report_json(report))
    with open(os.path.join(out_dir, "metrics.csv"), "w", encoding="utf-8") as fh:
        fh.write(metrics_csv(report.confusion))


def _echo_summary(report) -> None:
    click.echo(f"scenario: {report.scenario_id} (mode {report.mode}, seed {report.seed})")
    for zone, counts in report.confusion.per_zone.items():
        def fmt(v):
            return "n/a" if v is None else f"{v * 100.0:.1f}%"
        click.echo(f"  {zone.label:<9} acc {fmt(counts.accuracy)}  prec {fmt(counts.precision)}"
                   f"  rec {fmt(counts.recall)}  f {fmt(counts.fscore)}")
    if report.reaction_samples:
        click.echo(f"  reaction: n={len(report.reaction_samples)} "
                   f"mean {report.reaction_mean * 1000.0:.1f} ms "
                   f"(gaps {report.reaction_gaps})")
    if report.stop_samples:
        click.echo(f"  stop:     n={len(report.stop_samples)} "
                   f"mean {report.stop_mean * 1000.0:.1f} ms (gaps {report.stop_gaps})")
    click.echo(f"  collisions: {report.collision_count}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(), help="Scenario YAML.")
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--mode", type=click.Choice(["static_ssm", "dynamic_zones", "obstacle_avoidance"]),
              default=None, help="Override the operation mode.")
@click.option("--out-dir", default=None, help="Output directory (default out/<scenario>).")
def run(config_path, seed, mode, out_dir) -> None:
    """Run a scenario; writes events.ndjson, report.json and metrics.csv.

    Exits nonzero iff a collision event occurred.
    """
    from .metrics import build_report
    from .simulator import Simulation

    config = _load_config_or_exit(config_path, seed, mode)
    sim = Simulation(config)
    events = sim.run()
    report = build_report(events, scenario_id=config.scenario_id,
                          mode=config.mode.value, seed=config.seed)
    out = out_dir or os.path.join("out", config.scenario_id)
    _write_outputs(out, events, report)
    _echo_summary(report)
    click.echo(f"wrote {out}/events.ndjson, report.json, metrics.csv")
    if report.collision_count > 0:
        sys.exit(EXIT_COLLISION)


@main.command()
@click.option("--events", "events_path", required=True, type=click.Path(),
              help="Existing events.ndjson.")
@click.option("--out-dir", default=None, help="Output directory (default alongside the log).")
def report(events_path, out_dir) -> None:
    """Recompute report.json and metrics.csv from an event log."""
    from .metrics import build_report, metrics_csv, report_json

    try:
        with open(events_path, "r", encoding="utf-8") as fh:
            events = [json.loads(line) for line in fh if line.strip()]
    except FileNotFoundError:
        click.echo(f"event log not found: {events_path}", err=True)
        sys.exit(EXIT_CONFIG)
    except json.JSONDecodeError as exc:
        click.echo(f"malformed event log {events_path}: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    rep = build_report(events)
    out = out_dir or (os.path.dirname(os.path.abspath(events_path)))
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(report_json(rep))
    with open(os.path.join(out, "metrics.csv"), "w", encoding="utf-8") as fh:
        fh.write(metrics_csv(rep.confusion))
    _echo_summary(rep)


@main.command("validate-config")
@click.option("--config", "config_path", required=True, type=click.Path(), help="Scenario YAML.")
def validate_config(config_path) -> None:
    """Check a scenario file; prints OK or the first error."""
    from .config import ConfigError, load_scenario

    try:
        config = load_scenario(config_path)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    click.echo(f"OK: {config.scenario_id} ({config.mode.value}, "
               f"{len(config.operators)} operators, {config.duration:.1f} s)")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(), help="Scenario YAML.")
@click.option("--endpoint", default="127.0.0.1:8787", show_default=True,
              help="host:port to bind.")
@click.option("--realtime-factor", default=1.0, show_default=True,
              help="Pace multiplier; 2.0 runs twice real time.")
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--mode", type=click.Choice(["static_ssm", "dynamic_zones", "obstacle_avoidance"]),
              default=None, help="Override the operation mode.")
@click.option("--ui-dir", default=None, type=click.Path(),
              help="Directory of built UI assets to serve at /.")
def serve(config_path, endpoint, realtime_factor, seed, mode, ui_dir) -> None:
    """Serve live telemetry and accept control messages over a websocket."""
    from .serve import run_server

    config = _load_config_or_exit(config_path, seed, mode)
    host, _, port = endpoint.partition(":")
    if not port:
        click.echo(f"endpoint must be host:port, got {endpoint!r}", err=True)
        sys.exit(EXIT_CONFIG)
    run_server(config, host=host or "127.0.0.1", port=int(port),
               realtime_factor=realtime_factor, ui_dir=ui_dir)


if __name__ == "__main__":
    main()
