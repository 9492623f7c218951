"""RF link budget: log-distance SNR model fitted to measured endpoints,
multi-floor lookup, range solving, and the regulatory band/power check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, ModelError
from .fixtures import fixture_path, read_columns

#: Detection cutoff: readings at or below this SNR blend into the noise.
DETECTION_THRESHOLD_DB = 5.0

#: Log-distance reference; the near-zero-distance peak readings are anchored
#: here to keep the model finite.
REFERENCE_DISTANCE_M = 1.0


@dataclass(frozen=True)
class PathLossModel:
    """SNR(d) = snr0 - 10 n log10(d / 1 m), with a detection threshold."""

    snr0: float
    exponent: float
    threshold: float = DETECTION_THRESHOLD_DB

    def __post_init__(self):
        if self.exponent <= 0:
            raise ValueError("path-loss exponent must be positive")
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")


@dataclass(frozen=True)
class FloorModel:
    """Measured SNR by floor offset; offset 0 is the tag's own floor."""

    per_floor_snr: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.per_floor_snr and max(self.per_floor_snr.values()) != self.per_floor_snr.get(0):
            raise ValueError("SNR at floor offset 0 must be the maximum")


@dataclass(frozen=True)
class CompliancePolicy:
    """Operating band and radiated-power limit for unlicensed operation."""

    band: tuple[float, float] = (575e6, 600e6)
    max_eirp_w: float = 0.040
    measured_tx_dbm: float = -50.0

    def __post_init__(self):
        if not self.band[0] < self.band[1]:
            raise ValueError("band lower edge must be below upper edge")


@dataclass(frozen=True)
class ComplianceVerdict:
    passed: bool
    band_ok: bool
    power_ok: bool
    tx_w: float


def snr_db(p_signal: float, p_noise: float) -> float:
    """Signal-to-noise ratio in dB: 10 log10(P_signal / P_noise)."""
    if p_signal <= 0 or p_noise <= 0:
        raise ValueError("powers must be positive")
    return 10.0 * math.log10(p_signal / p_noise)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) * 1e-3


def fit_path_loss(anchor_near: tuple[float, float], anchor_far: tuple[float, float],
                  threshold: float = DETECTION_THRESHOLD_DB) -> PathLossModel:
    """Fit the log-distance model exactly through two (distance, SNR) points."""
    (d1, s1), (d2, s2) = anchor_near, anchor_far
    if d1 <= 0 or d2 <= 0:
        raise ValueError("distances must be positive")
    if d1 == d2:
        raise ValueError("anchor distances must be distinct")
    n = (s1 - s2) / (10.0 * math.log10(d2 / d1))
    snr0 = s1 + 10.0 * n * math.log10(d1 / REFERENCE_DISTANCE_M)
    return PathLossModel(snr0=snr0, exponent=n, threshold=threshold)


def snr_at(model: PathLossModel, d: float) -> float:
    """Model SNR at a distance (d >= the 1 m reference)."""
    if d < REFERENCE_DISTANCE_M:
        raise DomainError(f"distance {d} below the {REFERENCE_DISTANCE_M} m reference")
    return model.snr0 - 10.0 * model.exponent * math.log10(d / REFERENCE_DISTANCE_M)


def max_range(model: PathLossModel) -> float:
    """Distance where the model SNR meets the detection threshold.

    A threshold equal to the reference-distance SNR collapses the range to
    the 1 m reference itself.
    """
    if model.snr0 < model.threshold:
        raise ModelError("SNR at the reference distance is already below threshold")
    return REFERENCE_DISTANCE_M * 10.0 ** ((model.snr0 - model.threshold) / (10.0 * model.exponent))


def floor_snr(model: FloorModel, offset: int,
              threshold: float = DETECTION_THRESHOLD_DB) -> tuple[float, bool]:
    """Measured SNR at a floor offset and whether it is detectable.

    Detectability is strict (> threshold): the published 5 dB reading two
    floors up is classified as undetectable.
    """
    if offset not in model.per_floor_snr:
        raise DomainError(f"floor offset {offset} not in the measured table")
    snr = model.per_floor_snr[offset]
    return snr, snr > threshold


def load_default_floor_model() -> FloorModel:
    offsets, snrs = read_columns(fixture_path("floor_snr.csv"), "floor_offset", "snr_db")
    return FloorModel(per_floor_snr={int(o): s for o, s in zip(offsets, snrs)})


def compliance_check(policy: CompliancePolicy, freq: float, tx_dbm: float) -> ComplianceVerdict:
    """Band membership and radiated-power check for one emission."""
    band_ok = policy.band[0] <= freq <= policy.band[1]
    tx_w = dbm_to_watts(tx_dbm)
    power_ok = tx_w <= policy.max_eirp_w
    return ComplianceVerdict(passed=band_ok and power_ok, band_ok=band_ok,
                             power_ok=power_ok, tx_w=tx_w)
