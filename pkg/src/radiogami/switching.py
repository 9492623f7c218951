"""Intermittent power switching: 555-timer clock/duty model, average power,
and the lux-dependent oscillation-frequency drift with low-light shutdown.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import ModelError

#: Gate-drive overhead of the switching circuit: 7 uA at the 1 V timer rail.
SWITCH_OVERHEAD_W = 7e-6

#: Minimum timer supply voltage for reliable switching.
TIMER_MIN_SUPPLY_V = 0.6


@dataclass(frozen=True)
class TimerConfig:
    """Astable timer component values (R3, R4 in ohms, C_T in farads)."""

    r3: float
    r4: float
    ct: float
    bypass_diode: bool = False
    min_supply: float = TIMER_MIN_SUPPLY_V

    def __post_init__(self):
        if self.r3 <= 0 or self.r4 <= 0 or self.ct <= 0:
            raise ValueError("r3, r4 and ct must be positive")


@dataclass(frozen=True)
class SwitchingProfile:
    clock: float
    duty: float
    switch_overhead: float = SWITCH_OVERHEAD_W

    def __post_init__(self):
        if not 0.0 <= self.duty <= 1.0:
            raise ValueError("duty must be in [0, 1]")
        if self.clock <= 0:
            raise ValueError("clock must be positive")


@dataclass(frozen=True)
class LightResponseModel:
    """Affine lux-to-frequency drift with a hard shutdown cutoff.

    The regression slope from the published lux sweep is -0.06 MHz per
    100 lux (the prose also quotes 0.05; the regression value is the
    default).  Below ``shutdown_lux`` the harvested energy cannot sustain
    oscillation and the tag goes silent.
    """

    anchor_lux: float = 1000.0
    anchor_freq: float = 580.054e6
    slope: float = -0.06e6 / 100.0  # hertz per lux
    shutdown_lux: float = 500.0

    def __post_init__(self):
        if self.slope >= 0:
            raise ValueError("slope must be negative (frequency rises as light drops)")
        if not self.shutdown_lux < self.anchor_lux:
            raise ValueError("shutdown_lux must be below anchor_lux")


def clock_frequency(cfg: TimerConfig) -> float:
    """Astable clock frequency: 0.455 / ((R3 + 2 R4) * C_T)."""
    return 0.455 / ((cfg.r3 + 2.0 * cfg.r4) * cfg.ct)


def duty_cycle(cfg: TimerConfig) -> float:
    """Positive duty fraction of the timer output.

    Without the bypass diode this is R3 / (R3 + 2 R4) as published.  With a
    bypass diode across R4 the charge path skips R4, giving the standard
    astable modification R3 / (R3 + R4).
    """
    if cfg.bypass_diode:
        return cfg.r3 / (cfg.r3 + cfg.r4)
    return cfg.r3 / (cfg.r3 + 2.0 * cfg.r4)


def average_power(duty: float, tdo_power: float, has_switch: bool,
                  profile: SwitchingProfile | None = None) -> float:
    """Average input power under duty-cycled operation.

    duty * tdo_power plus the switch's own overhead when a switching
    circuit is present.
    """
    if not 0.0 <= duty <= 1.0:
        raise ValueError("duty must be in [0, 1]")
    overhead = (profile.switch_overhead if profile is not None else SWITCH_OVERHEAD_W)
    return duty * tdo_power + (overhead if has_switch else 0.0)


def frequency_under_light(model: LightResponseModel, lux: float) -> float | None:
    """Tag oscillation frequency at an illuminance, or None when shut down."""
    if lux < 0:
        raise ValueError("lux must be >= 0")
    if lux < model.shutdown_lux:
        return None
    return model.anchor_freq + model.slope * (lux - model.anchor_lux)


def design_timer(target_duty: float, target_clock: float, ct: float,
                 bypass_diode: bool | None = None) -> TimerConfig:
    """Solve the clock/duty equations for R3 and R4 at a given C_T.

    When ``bypass_diode`` is None the plain configuration is used for duty
    targets up to 1/3 (the regime where R4 >= R3) and the bypass variant
    above that.  Round-trips through :func:`clock_frequency` and
    :func:`duty_cycle` are exact up to float arithmetic.
    """
    if not 0.0 < target_duty < 1.0:
        raise ModelError(f"target duty {target_duty} outside (0, 1)")
    if target_clock <= 0:
        raise ModelError("target clock must be positive")
    if ct <= 0:
        raise ModelError("ct must be positive")
    total = 0.455 / (target_clock * ct)  # R3 + 2 R4
    if bypass_diode is None:
        bypass_diode = target_duty > 1.0 / 3.0
    if bypass_diode:
        r3 = total * target_duty / (2.0 - target_duty)
        r4 = total * (1.0 - target_duty) / (2.0 - target_duty)
    else:
        r3 = total * target_duty
        r4 = total * (1.0 - target_duty) / 2.0
    return TimerConfig(r3=r3, r4=r4, ct=ct, bypass_diode=bypass_diode)


def check_stated_switching(cfg: TimerConfig, stated_clock: float | None,
                           stated_duty: float | None, rel_tol: float = 0.01) -> list[str]:
    """Compare the timer equations against separately stated clock/duty.

    The published component values and the published clock/duty figures
    disagree by orders of magnitude; when a scenario supplies both, this
    emits a consistency warning instead of silently reconciling them.
    Returns the warning messages (also raised via ``warnings.warn``).
    """
    notes: list[str] = []
    computed_clock = clock_frequency(cfg)
    computed_duty = duty_cycle(cfg)
    if stated_clock is not None and abs(computed_clock - stated_clock) > rel_tol * abs(stated_clock):
        notes.append(
            f"timer equations give clock {computed_clock:.4g} Hz from components "
            f"(R3={cfg.r3:.3g}, R4={cfg.r4:.3g}, CT={cfg.ct:.3g}) but the stated "
            f"clock is {stated_clock:.4g} Hz; the stated value is used as the input"
        )
    if stated_duty is not None and abs(computed_duty - stated_duty) > rel_tol * abs(stated_duty):
        notes.append(
            f"timer equations give duty {computed_duty:.4g} from components but the "
            f"stated duty is {stated_duty:.4g}; the stated value is used as the input"
        )
    for msg in notes:
        warnings.warn(msg, UserWarning, stacklevel=2)
    return notes
