"""Zone-classifier confusion metrics and experiment reports.

Per-zone counts are one-vs-rest over aligned (truth, predicted) zone pairs,
one pair per operator per processed frame. A missing prediction is a false
negative for the true zone and a true negative everywhere else.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .safety import SafetyZone, ZONE_BY_LABEL
from .simulator import measure_reaction_time, measure_stop_time

__all__ = ["ZoneCounts", "ZoneConfusion", "ExperimentReport",
           "compute_zone_metrics", "build_report", "metrics_csv", "report_json"]

ZONE_ORDER = (SafetyZone.HIGH_RISK, SafetyZone.LOW_RISK, SafetyZone.SAFE)


@dataclass
class ZoneCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> Optional[float]:
        return (self.tp + self.tn) / self.total if self.total else None

    @property
    def precision(self) -> Optional[float]:
        denom = self.tp + self.fp
        return self.tp / denom if denom else None

    @property
    def recall(self) -> Optional[float]:
        denom = self.tp + self.fn
        return self.tp / denom if denom else None

    @property
    def fscore(self) -> Optional[float]:
        p, r = self.precision, self.recall
        if p is None or r is None or (p + r) == 0:
            return None
        return 2.0 * p * r / (p + r)


@dataclass
class ZoneConfusion:
    per_zone: dict = field(default_factory=lambda: {z: ZoneCounts() for z in ZONE_ORDER})
    samples: int = 0


def compute_zone_metrics(predicted: Sequence[Optional[SafetyZone]],
                         truth: Sequence[SafetyZone]) -> ZoneConfusion:
    """One-vs-rest confusion over aligned zone sequences."""
    if len(predicted) != len(truth):
        raise ValueError(
            f"sequence length mismatch: {len(predicted)} predictions vs {len(truth)} truths"
        )
    confusion = ZoneConfusion()
    for pred, true in zip(predicted, truth):
        confusion.samples += 1
        for zone in ZONE_ORDER:
            counts = confusion.per_zone[zone]
            if true == zone and pred == zone:
                counts.tp += 1
            elif true == zone:
                counts.fn += 1
            elif pred == zone:
                counts.fp += 1
            else:
                counts.tn += 1
    return confusion


@dataclass
class ExperimentReport:
    scenario_id: str
    mode: str
    seed: int
    confusion: ZoneConfusion
    reaction_samples: list
    reaction_gaps: int
    stop_samples: list
    stop_gaps: int
    collision_count: int

    @property
    def reaction_mean(self) -> Optional[float]:
        s = self.reaction_samples
        return sum(s) / len(s) if s else None

    @property
    def stop_mean(self) -> Optional[float]:
        s = self.stop_samples
        return sum(s) / len(s) if s else None


def _zone_pairs_from_events(events) -> tuple:
    predicted, truth = [], []
    for ev in events:
        if ev.get("event") != "zone_sample":
            continue
        truth.append(ZONE_BY_LABEL[ev["truth"]])
        pred = ev.get("pred")
        predicted.append(ZONE_BY_LABEL[pred] if pred is not None else None)
    return predicted, truth


def build_report(events, scenario_id: str = "", mode: str = "", seed: int = 0) -> ExperimentReport:
    """Assemble the full report from an event log."""
    header = next((e for e in events if e.get("event") == "run_header"), None)
    if header is not None:
        scenario_id = scenario_id or header.get("scenario", "")
        mode = mode or header.get("mode", "")
        seed = header.get("seed", seed)
    predicted, truth = _zone_pairs_from_events(events)
    reaction = measure_reaction_time(events)
    stops = measure_stop_time(events)
    transitions = sum(
        1 for e in events
        if e.get("event") == "truth_zone" and {e.get("from"), e.get("to")} == {"safe", "low_risk"}
    )
    hr_reports = sum(
        1 for e in events if e.get("event") == "report_zone" and e.get("to") == "high_risk"
    )
    return ExperimentReport(
        scenario_id=scenario_id,
        mode=mode,
        seed=seed,
        confusion=compute_zone_metrics(predicted, truth),
        reaction_samples=reaction,
        reaction_gaps=max(transitions - len(reaction), 0),
        stop_samples=stops,
        stop_gaps=max(hr_reports - len(stops), 0),
        collision_count=sum(1 for e in events if e.get("event") == "collision"),
    )


def metrics_csv(confusion: ZoneConfusion) -> str:
    """CSV with header zone,accuracy,precision,recall,fscore."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["zone", "accuracy", "precision", "recall", "fscore"])
    for zone in ZONE_ORDER:
        counts = confusion.per_zone[zone]
        writer.writerow([zone.label] + [
            "" if v is None else f"{v:.6f}"
            for v in (counts.accuracy, counts.precision, counts.recall, counts.fscore)
        ])
    return buf.getvalue()


def report_json(report: ExperimentReport) -> str:
    zones = {}
    for zone in ZONE_ORDER:
        counts = report.confusion.per_zone[zone]
        zones[zone.label] = {
            "tp": counts.tp, "fp": counts.fp, "tn": counts.tn, "fn": counts.fn,
            "accuracy": counts.accuracy,
            "precision": counts.precision,
            "recall": counts.recall,
            "fscore": counts.fscore,
        }
    doc = {
        "scenario": report.scenario_id,
        "mode": report.mode,
        "seed": report.seed,
        "zone_samples": report.confusion.samples,
        "zones": zones,
        "reaction_time": {
            "samples_s": report.reaction_samples,
            "mean_s": report.reaction_mean,
            "gaps": report.reaction_gaps,
        },
        "stop_time": {
            "samples_s": report.stop_samples,
            "mean_s": report.stop_mean,
            "gaps": report.stop_gaps,
        },
        "collisions": report.collision_count,
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
