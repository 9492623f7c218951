"""Deployment replay statistics.

Matches detected tag events against ground-truth interaction logs, computes
detection/failure rates, frequency-stability statistics, cross-tag
correlation, least-squares fits, and the per-interaction energy report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError
from .fixtures import read_csv, write_csv
from .harvest import Supercapacitor
from .dsp import TagEvent

GROUND_TRUTH_HEADER = ["tag_id", "timestamp_s", "stimulus"]
LUX_HEADER = ["timestamp_s", "lux"]

#: Tolerance (percentage points) beyond which a published per-interaction
#: energy figure is flagged as inconsistent with the stored-energy model.
ENERGY_MISMATCH_TOL_PP = 0.02


@dataclass(frozen=True)
class GroundTruthLog:
    """Logged interactions plus the ambient lux trace (1 s cadence)."""

    entries: tuple[tuple[str, float, str], ...]
    lux_trace: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        times = [t for _, t, _ in self.entries]
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValueError("ground-truth timestamps must be non-decreasing")

    def for_tag(self, tag_id: str) -> list[tuple[float, str]]:
        return [(t, s) for tid, t, s in self.entries if tid == tag_id]


@dataclass(frozen=True)
class FrequencyStats:
    mean: float
    sd: float
    min: float
    max: float
    count: int

    @property
    def bandwidth(self) -> float:
        """Occupied bandwidth in the published tables' sense: max - min."""
        return self.max - self.min

    @property
    def cv(self) -> float:
        """Coefficient of variation in percent (scale-free stability)."""
        return self.sd / self.mean * 100.0


@dataclass(frozen=True)
class TagDetectionStats:
    tag_id: str
    events_true: int
    events_detected: int
    misses: int
    false_positives: int
    mean_activation_s: float | None = None
    mean_on_time_s: float | None = None

    def __post_init__(self):
        if self.misses != self.events_true - self.events_detected or self.misses < 0:
            raise ValueError("misses must equal events_true - events_detected and be >= 0")


@dataclass(frozen=True)
class DetectionReport:
    per_tag: dict[str, TagDetectionStats]
    matches: tuple[tuple[str, float, TagEvent], ...] = ()
    empty_truth: bool = False

    @property
    def total_true(self) -> int:
        return sum(t.events_true for t in self.per_tag.values())

    @property
    def total_detected(self) -> int:
        return sum(t.events_detected for t in self.per_tag.values())

    @property
    def total_false_positives(self) -> int:
        return sum(t.false_positives for t in self.per_tag.values())

    @property
    def failure_rate(self) -> float:
        """Percent of ground-truth events that went undetected."""
        if self.total_true == 0:
            return 0.0
        return (self.total_true - self.total_detected) / self.total_true * 100.0


@dataclass(frozen=True)
class EnergyRow:
    tag_id: str
    on_time_s: float
    energy_pct: float
    published_pct: float | None = None
    model_mismatch: bool = False


def match_events(detected: list[TagEvent], truth: GroundTruthLog,
                 window: float = 5.0) -> DetectionReport:
    """Greedy one-to-one matching of detections to ground truth.

    Pairs share a tag id and lie within ``window`` seconds; closest pairs
    win.  Unmatched truths count as misses, unmatched detections as false
    positives.  An empty truth log yields an all-zero report flagged via
    ``empty_truth``.
    """
    if window <= 0:
        raise ValueError("window must be positive")
    if not truth.entries:
        per_tag = {}
        for e in detected:
            st = per_tag.setdefault(e.tag_id, [0, 0])
            st[1] += 1
        stats = {
            tid: TagDetectionStats(tag_id=tid, events_true=0, events_detected=0,
                                   misses=0, false_positives=fp)
            for tid, (_, fp) in per_tag.items()
        }
        return DetectionReport(per_tag=stats, empty_truth=True)

    tags = sorted({tid for tid, _, _ in truth.entries} | {e.tag_id for e in detected})
    per_tag: dict[str, TagDetectionStats] = {}
    matches: list[tuple[str, float, TagEvent]] = []
    for tid in tags:
        truths = truth.for_tag(tid)
        events = [e for e in detected if e.tag_id == tid]
        pairs = sorted(
            (abs(e.start - t), ti, ei)
            for ti, (t, _) in enumerate(truths)
            for ei, e in enumerate(events)
            if abs(e.start - t) <= window
        )
        used_t: set[int] = set()
        used_e: set[int] = set()
        tag_matches: list[tuple[float, TagEvent]] = []
        for _, ti, ei in pairs:
            if ti in used_t or ei in used_e:
                continue
            used_t.add(ti)
            used_e.add(ei)
            tag_matches.append((truths[ti][0], events[ei]))
        delays = [e.start - t for t, e in tag_matches]
        durations = [e.end - e.start for _, e in tag_matches]
        per_tag[tid] = TagDetectionStats(
            tag_id=tid,
            events_true=len(truths),
            events_detected=len(tag_matches),
            misses=len(truths) - len(tag_matches),
            false_positives=len(events) - len(tag_matches),
            mean_activation_s=float(np.mean(delays)) if delays else None,
            mean_on_time_s=float(np.mean(durations)) if durations else None,
        )
        matches.extend((tid, t, e) for t, e in tag_matches)
    return DetectionReport(per_tag=per_tag, matches=tuple(matches))


def frequency_stats(series: list[float] | np.ndarray) -> FrequencyStats:
    """Mean / sample SD (n-1) / extremes of an observed frequency series."""
    arr = np.asarray(series, dtype=float)
    if arr.size == 0:
        raise ValueError("series must be non-empty")
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return FrequencyStats(mean=float(arr.mean()), sd=sd,
                          min=float(arr.min()), max=float(arr.max()),
                          count=int(arr.size))


def pearson_correlation(x, y) -> float:
    """Pearson product-moment correlation of two equal-length series."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("series must have equal length >= 2")
    if x.std() == 0 or y.std() == 0:
        raise ValueError("series must have nonzero variance")
    return float(np.corrcoef(x, y)[0, 1])


def regression_fit(x, y) -> tuple[float, float, float]:
    """Ordinary least squares line fit: (slope, intercept, R^2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("series must have equal length >= 2")
    var_x = float(np.var(x))
    if var_x == 0:
        raise ValueError("x must have nonzero variance")
    slope = float(np.cov(x, y, ddof=0)[0, 1] / var_x)
    intercept = float(y.mean() - slope * x.mean())
    residuals = y - (slope * x + intercept)
    ss_res = float(residuals @ residuals)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r_squared


def energy_report(report: DetectionReport, profiles: dict[str, tuple[float, float]],
                  cap: Supercapacitor, tdo_power: float,
                  published_pct: dict[str, float] | None = None,
                  tol_pp: float = ENERGY_MISMATCH_TOL_PP) -> list[EnergyRow]:
    """Per-interaction energy draw as a percent of the storage capacitor.

    percent = tdo_power * on_time / (1/2 C V^2) * 100.  When published
    figures are supplied, rows whose model value disagrees beyond ``tol_pp``
    percentage points are flagged as a model mismatch rather than silently
    refitted.
    """
    if cap.energy <= 0:
        raise ValueError("capacitor must hold energy")
    rows = []
    for tag_id in sorted(profiles):
        _, on_time = profiles[tag_id]
        pct = tdo_power * on_time / cap.energy * 100.0
        pub = (published_pct or {}).get(tag_id)
        mismatch = pub is not None and abs(pct - pub) > tol_pp
        rows.append(EnergyRow(tag_id=tag_id, on_time_s=on_time, energy_pct=pct,
                              published_pct=pub, model_mismatch=mismatch))
    return rows


# --- file formats ----------------------------------------------------------

def read_ground_truth(path: str | Path) -> GroundTruthLog:
    rows = read_csv(path)
    try:
        entries = tuple(
            (r["tag_id"], float(r["timestamp_s"]), r.get("stimulus", ""))
            for r in rows
        )
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad ground-truth CSV {path}: {exc}") from exc
    return GroundTruthLog(entries=entries)


def write_ground_truth(path: str | Path, log: GroundTruthLog) -> None:
    write_csv(path, GROUND_TRUTH_HEADER,
              [[tid, f"{t:.3f}", s] for tid, t, s in log.entries])


def read_lux_trace(path: str | Path) -> tuple[tuple[float, float], ...]:
    rows = read_csv(path)
    try:
        return tuple((float(r["timestamp_s"]), float(r["lux"])) for r in rows)
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad lux CSV {path}: {exc}") from exc


def report_to_dict(report: DetectionReport) -> dict:
    return {
        "failure_rate_pct": report.failure_rate,
        "empty_truth": report.empty_truth,
        "total_true": report.total_true,
        "total_detected": report.total_detected,
        "total_false_positives": report.total_false_positives,
        "per_tag": {
            tid: {
                "events_true": t.events_true,
                "events_detected": t.events_detected,
                "misses": t.misses,
                "false_positives": t.false_positives,
                "mean_activation_s": t.mean_activation_s,
                "mean_on_time_s": t.mean_on_time_s,
            }
            for tid, t in sorted(report.per_tag.items())
        },
    }


def format_report(report: DetectionReport) -> str:
    lines = [
        f"{'tag':<16}{'true':>6}{'det':>6}{'miss':>6}{'fp':>5}{'act(s)':>9}{'on(s)':>8}"
    ]
    for tid, t in sorted(report.per_tag.items()):
        act = f"{t.mean_activation_s:.2f}" if t.mean_activation_s is not None else "-"
        on = f"{t.mean_on_time_s:.2f}" if t.mean_on_time_s is not None else "-"
        lines.append(
            f"{tid:<16}{t.events_true:>6}{t.events_detected:>6}{t.misses:>6}"
            f"{t.false_positives:>5}{act:>9}{on:>8}"
        )
    lines.append(f"failure rate: {report.failure_rate:.2f}%"
                 + ("  (no ground truth)" if report.empty_truth else ""))
    return "\n".join(lines)
