"""Interaction-to-frequency transduction.

Maps physical stimuli (tilt angle, ground-plane deformation, rotary detent,
slider position, origami fold state, tear fraction) to emitted frequencies
using the published calibration anchors, plus the trigger switches and
activation timelines of interaction-activated tags.

Continuous responses (tilt, deformation, slider, tear) interpolate linearly
between anchors; rotary and origami snap to the measured stages.  Noise
injection is Gaussian with the per-anchor standard deviations and is fully
seeded through the caller's ``numpy.random.Generator``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fixtures import fixture_path, read_csv

#: Tag band: every emitted absolute frequency must land inside this range.
TAG_BAND_HZ = (450e6, 600e6)

#: Default base for offset-style transducers: the stable anchor frequency of
#: the light-response tag.
DEFAULT_BASE_FREQ_HZ = 580.054e6

OFFSET_KINDS = ("tilt", "deformation")
ABSOLUTE_KINDS = ("rotary", "slider", "miura", "kresling", "tear")

#: Stimulus the calibration treats as the tag's resting state, per kind.
_REFERENCE_STIMULUS = {
    "rotary": "0",
    "slider": "2.5",
    "miura": "normal",
    "kresling": "normal",
    "tear": "0",
}

TILT_MAX_DEG = 90.0
DEFORMATION_STEP_MM = 0.125
DEFORMATION_CUTOFF_MM = 3.25

#: Mean activation delay and on-time (seconds) per tagged object.
ACTIVATION_PROFILES = {
    "soap_dispenser": (0.53, 2.0),
    "trash_can": (0.68, 3.0),
    "oven_door": (0.90, 6.0),
}

_anchors_cache: dict[str, list[tuple[str, float, float]]] | None = None


def _anchors() -> dict[str, list[tuple[str, float, float]]]:
    global _anchors_cache
    if _anchors_cache is None:
        table: dict[str, list[tuple[str, float, float]]] = {}
        for row in read_csv(fixture_path("transducer_anchors.csv")):
            table.setdefault(row["kind"], []).append(
                (row["stimulus"], float(row["freq_hz"]), float(row["sd_hz"]))
            )
        _anchors_cache = table
    return _anchors_cache


def _numeric_anchors(kind: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rows = sorted(_anchors()[kind], key=lambda r: float(r[0]))
    s = np.array([float(r[0]) for r in rows])
    f = np.array([r[1] for r in rows])
    sd = np.array([r[2] for r in rows])
    return s, f, sd


def offset_tilt(angle: float) -> float | None:
    """Frequency offset for a tilt angle, or None once tilted dark.

    Linear at the published rate (one anchor step per 15 degrees); at 90
    degrees the incident light falls below the shutdown level and the tag
    goes silent.
    """
    if not 0.0 <= angle <= TILT_MAX_DEG:
        raise DomainError(f"tilt angle {angle} outside [0, {TILT_MAX_DEG}]")
    if angle >= TILT_MAX_DEG:
        return None
    s, f, _ = _numeric_anchors("tilt")
    slope = (f[-1] - f[0]) / (s[-1] - s[0])
    return float(slope * angle)


def offset_deformation(height: float) -> float | None:
    """Frequency offset for a ground-plane deformation height (mm).

    Linear per quarter-turn step; beyond the 26-step limit (3.25 mm) the
    tag no longer reaches the receiver and None is returned.
    """
    if height < 0:
        raise DomainError("deformation height must be >= 0")
    if height > DEFORMATION_CUTOFF_MM:
        return None
    s, f, _ = _numeric_anchors("deformation")
    slope = (f[-1] - f[0]) / (s[-1] - s[0])
    return float(slope * height)


def offset_rotary(angle: float) -> float:
    """Absolute frequency at a rotary detent, snapping to the nearest stage."""
    s, f, _ = _numeric_anchors("rotary")
    if not s[0] <= angle <= s[-1]:
        raise DomainError(f"rotary angle {angle} outside [{s[0]}, {s[-1]}]")
    return float(f[int(np.argmin(np.abs(s - angle)))])


def snap_rotary(angle: float) -> float:
    """Nearest measured rotary detent for an angle."""
    s, _, _ = _numeric_anchors("rotary")
    if not s[0] <= angle <= s[-1]:
        raise DomainError(f"rotary angle {angle} outside [{s[0]}, {s[-1]}]")
    return float(s[int(np.argmin(np.abs(s - angle)))])


def offset_slider(length: float) -> float:
    """Absolute frequency for a slider extension (cm), linear between ends."""
    s, f, _ = _numeric_anchors("slider")
    if not s[0] <= length <= s[-1]:
        raise DomainError(f"slider length {length} outside [{s[0]}, {s[-1]}] cm")
    return float(np.interp(length, s, f))


def offset_origami(kind: str, state: str) -> float:
    """Absolute frequency of a Miura-Ori or Kresling surface in a fold state."""
    if kind not in ("miura", "kresling"):
        raise DomainError(f"unknown origami kind {kind!r}")
    rows = {r[0]: r[1] for r in _anchors()[kind]}
    if state not in rows:
        raise DomainError(f"unknown origami state {state!r}")
    return rows[state]


def offset_tear(torn: float) -> float:
    """Absolute frequency for a tear fraction in [0, 1], linear in the
    amount torn."""
    if not 0.0 <= torn <= 1.0:
        raise DomainError("torn fraction must be in [0, 1]")
    s, f, _ = _numeric_anchors("tear")
    return float(np.interp(torn, s, f))


def anchor_sd(kind: str, stimulus: float | str) -> float:
    """Reported standard deviation at (or interpolated between) anchors."""
    if kind in ("miura", "kresling"):
        rows = {r[0]: r[2] for r in _anchors()[kind]}
        return rows[str(stimulus)]
    s, _, sd = _numeric_anchors(kind)
    x = min(max(float(stimulus), s[0]), s[-1])
    if kind == "rotary":
        return float(sd[int(np.argmin(np.abs(s - x)))])
    return float(np.interp(x, s, sd))


@dataclass(frozen=True)
class Transducer:
    """A calibrated stimulus-to-frequency map bound to one tag.

    For the offset kinds (tilt, deformation) the emitted frequency is
    ``base_freq`` plus the calibrated offset.  For the absolute kinds the
    published anchors already carry the tag's tuning; passing ``base_freq``
    rebases them so the kind's resting stimulus emits at ``base_freq``
    (each physical tag is tuned individually).  ``noise_sd`` overrides the
    per-anchor standard deviations when set.
    """

    kind: str
    base_freq: float | None = None
    noise_sd: float | None = None

    def __post_init__(self):
        if self.kind not in OFFSET_KINDS + ABSOLUTE_KINDS:
            raise ValueError(f"unknown transducer kind {self.kind!r}")
        if self.base_freq is not None and not (
            TAG_BAND_HZ[0] <= self.base_freq <= TAG_BAND_HZ[1]
        ):
            raise ValueError("base_freq outside the tag band")
        if self.noise_sd is not None and self.noise_sd < 0:
            raise ValueError("noise_sd must be >= 0")

    def _noiseless(self, stimulus: float | str) -> float | None:
        if self.kind == "tilt":
            off = offset_tilt(float(stimulus))
        elif self.kind == "deformation":
            off = offset_deformation(float(stimulus))
        else:
            off = None
        if self.kind in OFFSET_KINDS:
            if off is None:
                return None
            base = self.base_freq if self.base_freq is not None else DEFAULT_BASE_FREQ_HZ
            return base + off

        if self.kind == "rotary":
            freq = offset_rotary(float(stimulus))
        elif self.kind == "slider":
            freq = offset_slider(float(stimulus))
        elif self.kind == "tear":
            freq = offset_tear(float(stimulus))
        else:
            freq = offset_origami(self.kind, str(stimulus))
        if self.base_freq is not None:
            rows = {r[0]: r[1] for r in _anchors()[self.kind]}
            freq += self.base_freq - rows[_REFERENCE_STIMULUS[self.kind]]
        return freq

    def evaluate(self, stimulus: float | str, rng: np.random.Generator | None = None) -> float | None:
        """Emitted frequency for a stimulus; None while the tag is silent.

        With ``rng`` supplied, Gaussian measurement noise at the anchor's
        reported standard deviation is added (reproducible per seed).
        """
        freq = self._noiseless(stimulus)
        if freq is None or rng is None:
            return freq
        sd = self.noise_sd if self.noise_sd is not None else anchor_sd(self.kind, stimulus)
        if sd > 0:
            freq += rng.normal(0.0, sd)
        return freq


@dataclass(frozen=True)
class TriggerSwitch:
    """Passive activation switch: a reed switch closed by magnet proximity
    (millimeters) or a tilt-ball switch closed beyond an angle (degrees).

    ``failure_prob`` models mechanical misses as an independent Bernoulli
    per event; deterministic replays script their misses explicitly instead.
    """

    kind: str
    threshold: float
    failure_prob: float = 0.0

    def __post_init__(self):
        if self.kind not in ("reed", "tilt_ball"):
            raise ValueError(f"unknown switch kind {self.kind!r}")
        if not 0.0 <= self.failure_prob <= 1.0:
            raise ValueError("failure_prob must be in [0, 1]")


def trigger_evaluate(sw: TriggerSwitch, stimulus: float,
                     rng: np.random.Generator | None = None) -> bool:
    """Whether the switch fires for a stimulus.

    A reed switch fires when the magnet comes within the threshold
    distance; a tilt-ball switch fires when tilted beyond the threshold
    angle.  A crossing still misses with probability ``failure_prob``
    (seeded draw from ``rng``).
    """
    if sw.kind == "reed":
        crossed = stimulus <= sw.threshold
    else:
        crossed = stimulus > sw.threshold
    if not crossed:
        return False
    if sw.failure_prob == 0.0:
        return True
    if rng is None:
        raise ValueError("failure_prob > 0 requires an rng")
    return bool(rng.random() >= sw.failure_prob)


@dataclass(frozen=True)
class TagState:
    active: bool
    emitted_freq: float | None = None
    on_time: float = 0.0
    activation_time: float = 0.0

    def __post_init__(self):
        if self.active != (self.emitted_freq is not None):
            raise ValueError("emitted_freq must be present iff active")


def activate(state: TagState, activation_time: float, on_time: float,
             freq: float) -> tuple[tuple[float, TagState], ...]:
    """Timeline of an interaction-activated emission.

    Returns (start offset seconds, state) segments: dormant during the
    activation delay, emitting at ``freq`` for ``on_time``, then dormant
    again.  A zero on-time produces no emission segment.
    """
    if state.active:
        raise ValueError("tag must be inactive before activation")
    if activation_time < 0 or on_time < 0:
        raise ValueError("times must be >= 0")
    idle = TagState(active=False, on_time=on_time, activation_time=activation_time)
    if on_time == 0:
        return ((0.0, idle),)
    emitting = TagState(active=True, emitted_freq=freq,
                        on_time=on_time, activation_time=activation_time)
    return (
        (0.0, idle),
        (activation_time, emitting),
        (activation_time + on_time, idle),
    )
