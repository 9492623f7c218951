"""Electrical model of the tunnel-diode oscillator.

Covers the diode I-V curve, the bias operating point, the oscillation
condition and frequency of the small-signal loop, the oscillator's input
power draw, and the copper-trace durability curve.  All values are plain
SI units (volts, amperes, ohms, siemens, henries, farads, hertz, watts).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ModelError, NoOscillationError
from .fixtures import fixture_path, read_columns

#: Negative-conductance magnitude quoted for the MP1X4266 (siemens).
DEFAULT_NEGATIVE_CONDUCTANCE_S = 0.01

#: Junction capacitance is not published for the MP1X4266; 1 pF puts the
#: loop in the 575-600 MHz band with L around 75 nH.  Overridable.
DEFAULT_JUNCTION_CAPACITANCE_F = 1e-12


@dataclass(frozen=True)
class TunnelDiode:
    """Tunnel diode described by a piecewise-linear I-V table.

    The curve is the measured characteristic digitized into breakpoints;
    no analytic tunneling model is fitted.  ``peak_voltage`` and
    ``valley_voltage`` bound the negative-differential-resistance (NDR)
    window, inside which the curve slope must be negative.
    """

    peak_voltage: float
    valley_voltage: float
    iv_curve: tuple[tuple[float, float], ...]
    negative_conductance: float = DEFAULT_NEGATIVE_CONDUCTANCE_S
    junction_capacitance: float = DEFAULT_JUNCTION_CAPACITANCE_F

    def __post_init__(self):
        if not self.peak_voltage < self.valley_voltage:
            raise ValueError("peak_voltage must be below valley_voltage")
        if abs(self.negative_conductance) <= 0:
            raise ValueError("negative_conductance magnitude must be > 0")
        if self.junction_capacitance <= 0:
            raise ValueError("junction_capacitance must be > 0")
        v = [p[0] for p in self.iv_curve]
        if len(v) < 2 or any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("iv_curve voltages must be strictly increasing")
        for (v0, i0), (v1, i1) in zip(self.iv_curve, self.iv_curve[1:]):
            seg_lo, seg_hi = max(v0, self.peak_voltage), min(v1, self.valley_voltage)
            if seg_lo < seg_hi and i1 >= i0:
                raise ValueError("iv_curve slope must be negative inside the NDR window")

    @property
    def voltages(self) -> np.ndarray:
        return np.array([p[0] for p in self.iv_curve])

    @property
    def currents(self) -> np.ndarray:
        return np.array([p[1] for p in self.iv_curve])

    def in_ndr(self, v: float) -> bool:
        return self.peak_voltage <= v <= self.valley_voltage


@dataclass(frozen=True)
class BiasNetwork:
    """Resistive bias network: the diode sits in parallel with ``r1`` and is
    fed from ``supply_voltage`` through ``r2``, so the diode voltage equals
    the voltage across r1.

    ``equivalent_resistance`` is the loop resistance R_T used by the
    oscillation equations.  The published description leaves its topology
    open; it defaults to r1 || r2 and may be overridden per configuration.
    """

    r1: float
    r2: float
    supply_voltage: float
    equivalent_resistance: float | None = None

    def __post_init__(self):
        if self.r1 <= 0 or self.r2 <= 0:
            raise ValueError("r1 and r2 must be positive")

    @property
    def r_t(self) -> float:
        if self.equivalent_resistance is not None:
            return self.equivalent_resistance
        return self.r1 * self.r2 / (self.r1 + self.r2)


@dataclass(frozen=True)
class ResonantTank:
    """Series L with the diode junction capacitance (or an override)."""

    inductance: float
    capacitance: float = DEFAULT_JUNCTION_CAPACITANCE_F

    def __post_init__(self):
        if self.inductance <= 0 or self.capacitance <= 0:
            raise ValueError("inductance and capacitance must be positive")

    @classmethod
    def for_diode(cls, diode: TunnelDiode, inductance: float) -> "ResonantTank":
        return cls(inductance=inductance, capacitance=diode.junction_capacitance)


@dataclass(frozen=True)
class DurabilityCurve:
    """Bending cycles to failure vs. copper trace thickness (mm)."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        t = [p[0] for p in self.points]
        c = [p[1] for p in self.points]
        if len(t) < 2 or any(b <= a for a, b in zip(t, t[1:])):
            raise ValueError("thickness values must be strictly increasing")
        if any(b < a for a, b in zip(c, c[1:])):
            raise ValueError("cycle counts must be non-decreasing")


@dataclass(frozen=True)
class BiasPoint:
    """Operating point returned by :func:`bias_point`.

    ``in_ndr`` tells which tie-break case occurred: True when an
    intersection inside the NDR window was found, False when the
    lowest-voltage intersection had to be used instead.
    """

    voltage: float
    current: float
    in_ndr: bool
    intersections: tuple[float, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class StabilityReport:
    """Eq.-style stability figures for a bias network / diode / tank trio.

    ``ratio`` is (R_T / |g_d|) divided by (L / C); exactly 1.0 means the
    impedance-matching identity is met.  ``loop_loss`` is R_T * |g_d|, the
    radicand term deciding whether the loop can oscillate at all.
    """

    ratio: float
    loop_loss: float

    @property
    def oscillates(self) -> bool:
        return self.loop_loss < 1.0


def load_default_diode() -> TunnelDiode:
    """MP1X4266 model built from the digitized fixture curve."""
    v, i = read_columns(fixture_path("diode_iv.csv"), "voltage_v", "current_a")
    return TunnelDiode(
        peak_voltage=0.065,
        valley_voltage=0.200,
        iv_curve=tuple(zip(v, i)),
    )


def load_default_durability() -> DurabilityCurve:
    t, c = read_columns(fixture_path("durability.csv"), "thickness_mm", "cycles")
    return DurabilityCurve(points=tuple(zip(t, c)))


def iv_current(diode: TunnelDiode, v: float) -> float:
    """Diode current at voltage ``v`` by piecewise-linear interpolation."""
    volts = diode.voltages
    if v < volts[0] or v > volts[-1]:
        raise DomainError(f"voltage {v} outside I-V table domain [{volts[0]}, {volts[-1]}]")
    return float(np.interp(v, volts, diode.currents))


def intersect_load_line(
    curve_v: np.ndarray,
    curve_i: np.ndarray,
    supply_voltage: float,
    r1: float,
    r2: float,
) -> tuple[float, ...]:
    """All voltages where the resistive load line crosses a piecewise-linear
    curve.  Load current available to the device at voltage v is
    (supply - v)/r2 - v/r1.
    """
    def residual(v, i):
        return i - ((supply_voltage - v) / r2 - v / r1)

    roots: list[float] = []
    res = [residual(v, i) for v, i in zip(curve_v, curve_i)]
    for k in range(len(curve_v) - 1):
        f0, f1 = res[k], res[k + 1]
        if f0 == 0.0:
            roots.append(float(curve_v[k]))
        elif f0 * f1 < 0:
            # both curve and load line are linear on the segment
            frac = f0 / (f0 - f1)
            roots.append(float(curve_v[k] + frac * (curve_v[k + 1] - curve_v[k])))
    if res[-1] == 0.0:
        roots.append(float(curve_v[-1]))
    # collapse near-duplicates from breakpoint hits
    dedup: list[float] = []
    for r in sorted(roots):
        if not dedup or r - dedup[-1] > 1e-12:
            dedup.append(r)
    return tuple(dedup)


def bias_point(net: BiasNetwork, diode: TunnelDiode) -> BiasPoint:
    """Operating point of the diode under the bias network.

    Intersects the load line with the I-V table.  When several
    intersections exist the one inside the NDR window wins (that is the
    intended operating region); otherwise the lowest-voltage intersection
    is returned and flagged via ``in_ndr=False``.
    """
    if net.supply_voltage < 0:
        raise ValueError("supply_voltage must be >= 0")
    roots = intersect_load_line(
        diode.voltages, diode.currents, net.supply_voltage, net.r1, net.r2
    )
    if not roots:
        raise ModelError("load line does not intersect the I-V curve domain")
    ndr = [r for r in roots if diode.in_ndr(r)]
    v = ndr[0] if ndr else roots[0]
    return BiasPoint(
        voltage=v,
        current=iv_current(diode, v),
        in_ndr=bool(ndr),
        intersections=roots,
    )


def stability_ratio(net: BiasNetwork, diode: TunnelDiode, tank: ResonantTank) -> StabilityReport:
    g = abs(diode.negative_conductance)
    ratio = (net.r_t / g) / (tank.inductance / tank.capacitance)
    return StabilityReport(ratio=ratio, loop_loss=net.r_t * g)


def oscillation_frequency(net: BiasNetwork, diode: TunnelDiode, tank: ResonantTank) -> float:
    """Small-signal oscillation frequency of the loop.

    f = (1 / 2 pi) * sqrt((1 - R_T * |g_d|) / (L * C)).  A non-positive
    radicand means the loop is overdamped and cannot oscillate; that is
    surfaced as :class:`NoOscillationError` rather than clamped, because the
    published component values themselves land in that regime.
    """
    radicand = 1.0 - net.r_t * abs(diode.negative_conductance)
    if radicand <= 0:
        raise NoOscillationError(radicand)
    return math.sqrt(radicand / (tank.inductance * tank.capacitance)) / (2.0 * math.pi)


class _InterpTable:
    """Monotone-domain linear interpolation with hard domain errors."""

    def __init__(self, x: np.ndarray, y: np.ndarray, what: str):
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.what = what

    def __call__(self, x: float) -> float:
        if x < self.x[0] or x > self.x[-1]:
            raise DomainError(
                f"{self.what}: {x} outside domain [{self.x[0]}, {self.x[-1]}]"
            )
        return float(np.interp(x, self.x, self.y))


_power_table: _InterpTable | None = None


def tdo_input_power(bias_voltage: float) -> float:
    """Oscillator input power at a bias voltage, from the digitized table."""
    global _power_table
    if _power_table is None:
        v, p = read_columns(fixture_path("tdo_power.csv"), "voltage_v", "power_w")
        _power_table = _InterpTable(np.array(v), np.array(p), "bias voltage")
    return _power_table(bias_voltage)


def cycles_to_failure(curve: DurabilityCurve, thickness: float) -> float:
    """Bending cycles a trace of the given thickness survives.

    Linear interpolation between the published points only; extrapolating
    beyond the tested thicknesses is refused.
    """
    t = np.array([p[0] for p in curve.points])
    c = np.array([p[1] for p in curve.points])
    return _InterpTable(t, c, "trace thickness")(thickness)
