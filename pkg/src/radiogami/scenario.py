"""Top-level simulation loop.

Drives a set of tags (harvesting, switching, transduction, triggers) and an
environment (lux trace, interaction script) through time, through the link
model, into the receiver pipeline, producing spectrograms, event logs and
detection reports.

Two execution modes share one frame grid:

* ``iq`` synthesizes complex baseband and runs the real STFT pipeline
  (used to validate the DSP path on short scenarios);
* ``spectral`` places tones straight into spectrogram rows, is fully
  deterministic, and supports time compression: silent spans produce no
  frames at all while timestamps stay on the global grid, which is what
  makes a 60-hour sparse replay run in seconds.
"""

from __future__ import annotations

import copy
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dsp
from .analytics import DetectionReport, GroundTruthLog, match_events
from .errors import InputError
from .harvest import Supercapacitor, charge_step, harvest_power, load_default_array
from .switching import LightResponseModel, frequency_under_light
from .transducers import Transducer, TriggerSwitch, trigger_evaluate
from .fixtures import fixture_path

SCHEMA_VERSION = 1

#: Documented default seed for every seeded entry point.
DEFAULT_SEED = 20250810

#: Seed of the shipped 60-hour deployment replay (also the seed under which
#: Monte-Carlo trigger draws reproduce the replay's three scripted misses).
DEPLOYMENT_SEED = 13

#: Uniform jitter applied around the per-object mean activation delay.
ACTIVATION_JITTER = 0.20

_DEPLOYMENT_SCENARIO = "scenarios/deployment_60h.json"


# --- configuration ---------------------------------------------------------

@dataclass(frozen=True)
class ReceiverConfig:
    sample_rate_hz: float = dsp.DEFAULT_SAMPLE_RATE
    center_freq_hz: float = 0.0
    fft_size: int = dsp.DEFAULT_FFT_SIZE
    hop: int | None = None
    averages: int = 16
    noise_floor_db: float = -95.0
    threshold_db: float = 5.0
    debounce_frames: int = 3
    guard_bins: int = 8
    neighborhood_bins: int = 128

    @property
    def hop_samples(self) -> int:
        return self.hop if self.hop is not None else self.fft_size // 2

    @property
    def frame_duration(self) -> float:
        return self.hop_samples * self.averages / self.sample_rate_hz


@dataclass(frozen=True)
class LuxTraceConfig:
    """Ambient illuminance over time.

    ``constant`` holds one level; ``daily_cycle`` is a raised cosine between
    ``min_lux`` and ``max_lux``; ``piecewise`` holds each level until the
    next breakpoint.
    """

    kind: str = "constant"
    lux: float = 800.0
    min_lux: float = 30.0
    max_lux: float = 350.0
    period_s: float = 86400.0
    phase_s: float = 0.0
    points: tuple[tuple[float, float], ...] = ()

    def at(self, t: float) -> float:
        if self.kind == "constant":
            return self.lux
        if self.kind == "daily_cycle":
            phase = 2.0 * math.pi * (t + self.phase_s) / self.period_s
            return self.min_lux + (self.max_lux - self.min_lux) * 0.5 * (1.0 - math.cos(phase))
        if self.kind == "piecewise":
            level = self.points[0][1]
            for tp, lux in self.points:
                if t >= tp:
                    level = lux
                else:
                    break
            return level
        raise InputError(f"unknown lux trace kind {self.kind!r}")


@dataclass(frozen=True)
class ScriptedInteraction:
    t_s: float
    tag_id: str
    stimulus: float | str = ""
    freq_hz: float | None = None
    miss: bool = False


@dataclass(frozen=True)
class TagConfig:
    tag_id: str
    band_hz: tuple[float, float]
    mode: str = "interaction"  # or "continuous"
    snr_db: float = 30.0       # tone level over the receiver floor at the tag's range

    # interaction-activated tags
    trigger: TriggerSwitch | None = None
    activation_s: float = 0.5
    activation_jitter: float = ACTIVATION_JITTER
    on_time_s: float = 2.0
    cap_f: float = 0.047
    cap_v: float = 1.0
    min_emit_v: float = 0.25
    tdo_power_w: float = 50e-6
    trickle_power_w: float = 2e-6
    freq_mean_hz: float | None = None
    freq_sd_hz: float = 0.0

    # continuous tags
    light_response: LightResponseModel | None = None
    transducer: Transducer | None = None
    stimulus: float | str | None = None
    duty: float = 1.0
    noise_sd_hz: float = 0.0
    photodiodes: int = 25

    def __post_init__(self):
        if self.mode not in ("interaction", "continuous"):
            raise ValueError(f"unknown tag mode {self.mode!r}")
        if not self.band_hz[0] < self.band_hz[1]:
            raise ValueError("band must satisfy lo < hi")


@dataclass(frozen=True)
class Scenario:
    name: str
    duration_s: float
    tags: tuple[TagConfig, ...]
    interactions: tuple[ScriptedInteraction, ...] = ()
    lux: LuxTraceConfig = LuxTraceConfig()
    receiver: ReceiverConfig = ReceiverConfig()
    time_step_s: float = 0.01
    seed: int = DEFAULT_SEED
    match_window_s: float = 5.0
    allow_band_overlap: bool = False

    def __post_init__(self):
        if self.time_step_s <= 0:
            raise ValueError("time_step_s must be positive")
        if not self.allow_band_overlap:
            spans = sorted((t.band_hz, t.tag_id) for t in self.tags)
            for (a, _), (b, bid) in zip(spans, spans[1:]):
                if b[0] < a[1]:
                    raise ValueError(
                        f"tag bands overlap at {bid}; set allow_band_overlap for "
                        "intentional overlap studies"
                    )

    def tag(self, tag_id: str) -> TagConfig:
        for t in self.tags:
            if t.tag_id == tag_id:
                return t
        raise KeyError(tag_id)

    def bands(self) -> list[tuple[str, tuple[float, float]]]:
        return [(t.tag_id, t.band_hz) for t in self.tags]


# --- run products ----------------------------------------------------------

@dataclass(frozen=True)
class Emission:
    """One realized tag transmission interval."""

    tag_id: str
    start_s: float
    end_s: float
    freq_hz: float
    truth_t_s: float | None = None
    fired: bool = True
    cap_v_before: float | None = None
    cap_v_after: float | None = None
    lux: float | None = None


@dataclass(frozen=True)
class SimTrace:
    emissions: tuple[Emission, ...] = ()
    step_times_s: np.ndarray | None = None
    step_freqs: dict[str, np.ndarray] = field(default_factory=dict)
    step_cap_v: dict[str, np.ndarray] = field(default_factory=dict)


@dataclass(frozen=True)
class RunResult:
    scenario: Scenario
    trace: SimTrace
    events: tuple[dsp.TagEvent, ...]
    ground_truth: GroundTruthLog
    report: DetectionReport

    def detection_latencies(self) -> list[float]:
        """Detected-start minus emission-start for every matched event."""
        out = []
        starts = {}
        for em in self.trace.emissions:
            if em.fired and em.truth_t_s is not None:
                starts[(em.tag_id, em.truth_t_s)] = em.start_s
        for tag_id, truth_t, event in self.report.matches:
            if (tag_id, truth_t) in starts:
                out.append(event.start - starts[(tag_id, truth_t)])
        return out


# --- per-step state (the `step` operation) ---------------------------------

@dataclass
class _TagRuntime:
    cap: Supercapacitor
    emitting_until: float = -1.0
    emit_freq: float | None = None


def _continuous_freq(tag: TagConfig, lux: float,
                     rng: np.random.Generator | None) -> float | None:
    """Emitted frequency of a powered tag at an illuminance, or None."""
    model = tag.light_response or LightResponseModel()
    drift = frequency_under_light(model, lux)
    if drift is None:
        return None
    if tag.transducer is not None and tag.stimulus is not None:
        base = tag.transducer.evaluate(tag.stimulus, rng)
        if base is None:
            return None
        return base + (drift - model.anchor_freq)
    if rng is not None and tag.noise_sd_hz > 0:
        drift += rng.normal(0.0, tag.noise_sd_hz)
    return drift


def step(scenario: Scenario, t: float, state: dict[str, _TagRuntime] | None = None,
         rng: np.random.Generator | None = None) -> dict[str, float | None]:
    """Per-tag emission state at time ``t``.

    Continuous tags harvest, keep their bias capacitor charged, and emit at
    their lux-drifted frequency while above the shutdown level; interaction
    tags stay silent unless a scripted activation window covers ``t``.
    Mainly a probing/debugging surface; ``run`` drives whole scenarios.
    """
    if not 0.0 <= t <= scenario.duration_s:
        raise ValueError("t outside the scenario duration")
    lux = scenario.lux.at(t)
    out: dict[str, float | None] = {}
    for tag in scenario.tags:
        if tag.mode == "continuous":
            out[tag.tag_id] = _continuous_freq(tag, lux, rng)
        else:
            runtime = (state or {}).get(tag.tag_id)
            if runtime is not None and runtime.emitting_until > t:
                out[tag.tag_id] = runtime.emit_freq
            else:
                out[tag.tag_id] = None
    return out


# --- emission scheduling ---------------------------------------------------

def _bounded_standardized(rng: np.random.Generator, n: int, lo_z: float,
                          hi_z: float, max_tries: int = 400) -> np.ndarray:
    """Residuals with exact zero mean, unit sample SD (n-1), inside [lo, hi].

    Alternating projection between the moment constraints and the box;
    retries with a fresh draw when a fixed point is not reached.
    """
    if n < 3:
        raise ValueError("need at least 3 residuals to standardize")
    for _ in range(max_tries):
        z = rng.normal(size=n)
        for _ in range(200):
            z = (z - z.mean()) / z.std(ddof=1)
            if z.min() >= lo_z and z.max() <= hi_z:
                return z
            z = np.clip(z, lo_z, hi_z)
    raise RuntimeError("could not standardize residuals inside the bounds")


def _schedule_interactions(scenario: Scenario,
                           rng_trigger: np.random.Generator,
                           rng_jitter: np.random.Generator,
                           rng_freq: np.random.Generator) -> list[Emission]:
    """Turn the interaction script into realized emissions.

    Scripted ``miss`` entries model mechanical switch failures exactly
    (deployment replay); Bernoulli failures additionally apply when a
    trigger carries a nonzero failure probability (Monte-Carlo mode).
    Event frequencies come from the script when given; otherwise per-tag
    ``freq_mean/sd`` draws are standardized over the fired events so the
    realized series carries exactly the configured moments.
    """
    emissions: list[Emission] = []
    fired_by_tag: dict[str, list[int]] = {}
    entries = sorted(scenario.interactions, key=lambda e: e.t_s)
    fired_flags: list[bool] = []
    for entry in entries:
        tag = scenario.tag(entry.tag_id)
        if tag.mode != "interaction":
            raise InputError(f"scripted interaction for non-interaction tag {tag.tag_id}")
        fired = not entry.miss
        if fired and tag.trigger is not None:
            stim = float(entry.stimulus) if entry.stimulus != "" else (
                tag.trigger.threshold + (1.0 if tag.trigger.kind == "tilt_ball" else -1.0)
            )
            fired = trigger_evaluate(tag.trigger, stim, rng_trigger)
        fired_flags.append(fired)
        if fired:
            fired_by_tag.setdefault(entry.tag_id, []).append(len(fired_flags) - 1)

    # frequency assignment for fired events lacking a scripted frequency
    freqs: dict[int, float] = {}
    for tag_id in sorted(fired_by_tag):
        tag = scenario.tag(tag_id)
        idxs = [i for i in fired_by_tag[tag_id] if entries[i].freq_hz is None]
        for i in fired_by_tag[tag_id]:
            if entries[i].freq_hz is not None:
                freqs[i] = float(entries[i].freq_hz)
        if not idxs:
            continue
        mean = tag.freq_mean_hz if tag.freq_mean_hz is not None else \
            (tag.band_hz[0] + tag.band_hz[1]) / 2.0
        sd = tag.freq_sd_hz
        if sd <= 0 or len(idxs) < 3:
            for i in idxs:
                freqs[i] = mean
            continue
        bin_hz = scenario.receiver.sample_rate_hz / scenario.receiver.fft_size
        lo_z = (tag.band_hz[0] + 2 * bin_hz - mean) / sd
        hi_z = (tag.band_hz[1] - 2 * bin_hz - mean) / sd
        z = _bounded_standardized(rng_freq, len(idxs), lo_z, hi_z)
        for i, zi in zip(idxs, z):
            freqs[i] = mean + sd * zi

    runtimes = {
        t.tag_id: _TagRuntime(cap=Supercapacitor(capacitance=t.cap_f, voltage=t.cap_v,
                                                 label=t.tag_id))
        for t in scenario.tags if t.mode == "interaction"
    }
    last_t = {tag_id: 0.0 for tag_id in runtimes}
    for i, entry in enumerate(entries):
        tag = scenario.tag(entry.tag_id)
        rt = runtimes[entry.tag_id]
        # trickle recharge since the previous event, clamped at the rest voltage
        dt = entry.t_s - last_t[entry.tag_id]
        if dt > 0:
            recharged = charge_step(rt.cap, tag.trickle_power_w, 0.0, dt)
            rt.cap = recharged if recharged.voltage < tag.cap_v else \
                Supercapacitor(tag.cap_f, tag.cap_v, rt.cap.label)
        last_t[entry.tag_id] = entry.t_s
        lux = scenario.lux.at(entry.t_s)
        if not fired_flags[i]:
            emissions.append(Emission(tag_id=entry.tag_id, start_s=entry.t_s,
                                      end_s=entry.t_s, freq_hz=0.0,
                                      truth_t_s=entry.t_s, fired=False,
                                      cap_v_before=rt.cap.voltage,
                                      cap_v_after=rt.cap.voltage, lux=lux))
            continue
        jitter = rng_jitter.uniform(1.0 - tag.activation_jitter, 1.0 + tag.activation_jitter)
        start = entry.t_s + tag.activation_s * jitter
        v_before = rt.cap.voltage
        if v_before < tag.min_emit_v:
            # stored energy below the oscillator's minimum bias: no emission
            emissions.append(Emission(tag_id=entry.tag_id, start_s=entry.t_s,
                                      end_s=entry.t_s, freq_hz=0.0,
                                      truth_t_s=entry.t_s, fired=False,
                                      cap_v_before=v_before, cap_v_after=v_before,
                                      lux=lux))
            continue
        rt.cap = charge_step(rt.cap, 0.0, tag.tdo_power_w, tag.on_time_s)
        emissions.append(Emission(tag_id=entry.tag_id, start_s=start,
                                  end_s=start + tag.on_time_s, freq_hz=freqs[i],
                                  truth_t_s=entry.t_s, fired=True,
                                  cap_v_before=v_before, cap_v_after=rt.cap.voltage,
                                  lux=lux))
    return emissions


def _schedule_continuous(scenario: Scenario,
                         rng: np.random.Generator) -> tuple[list[Emission], SimTrace]:
    """Step the continuous tags over the grid and coalesce equal-frequency
    runs into emissions."""
    n = int(round(scenario.duration_s / scenario.time_step_s))
    times = np.arange(n) * scenario.time_step_s
    emissions: list[Emission] = []
    step_freqs: dict[str, np.ndarray] = {}
    step_cap: dict[str, np.ndarray] = {}
    for tag in scenario.tags:
        if tag.mode != "continuous":
            continue
        freqs = np.full(n, np.nan)
        caps = np.full(n, np.nan)
        cap = Supercapacitor(capacitance=tag.cap_f, voltage=tag.cap_v, label=tag.tag_id)
        array = load_default_array(tag.photodiodes)
        for k, t in enumerate(times):
            lux = scenario.lux.at(float(t))
            harvested = harvest_power(array, lux)
            load = tag.duty * tag.tdo_power_w
            cap = charge_step(cap, harvested, load, scenario.time_step_s)
            caps[k] = cap.voltage
            if cap.voltage < tag.min_emit_v:
                continue
            f = _continuous_freq(tag, lux, rng if tag.noise_sd_hz > 0 else None)
            if f is not None:
                freqs[k] = f
        step_freqs[tag.tag_id] = freqs
        step_cap[tag.tag_id] = caps
        # coalesce constant-frequency runs
        k = 0
        while k < n:
            if math.isnan(freqs[k]):
                k += 1
                continue
            j = k
            while j + 1 < n and freqs[j + 1] == freqs[k]:
                j += 1
            emissions.append(Emission(tag_id=tag.tag_id, start_s=float(times[k]),
                                      end_s=float(times[j]) + scenario.time_step_s,
                                      freq_hz=float(freqs[k]), lux=scenario.lux.at(float(times[k]))))
            k = j + 1
    trace = SimTrace(emissions=tuple(emissions), step_times_s=times,
                     step_freqs=step_freqs, step_cap_v=step_cap)
    return emissions, trace


# --- run -------------------------------------------------------------------

def _frame_segments(emissions: list[Emission], frame_dur: float, duration: float,
                    pad_frames: int, compress: bool) -> list[tuple[int, int]]:
    total_frames = max(1, int(math.floor(duration / frame_dur)))
    if not compress:
        return [(0, total_frames)]
    spans = []
    for em in emissions:
        if not em.fired or em.end_s <= em.start_s:
            continue
        i0 = max(0, int(math.floor(em.start_s / frame_dur)) - pad_frames)
        i1 = min(total_frames, int(math.ceil(em.end_s / frame_dur)) + pad_frames)
        spans.append((i0, i1))
    spans.sort()
    merged: list[tuple[int, int]] = []
    for i0, i1 in spans:
        if merged and i0 <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], i1))
        else:
            merged.append((i0, i1))
    return merged


def run(scenario: Scenario, mode: str = "spectral", compress: bool = True) -> RunResult:
    """Execute a scenario end to end.

    Deterministic for a fixed (scenario, seed): the same seed always yields
    bit-identical event logs.  ``spectral`` mode may skip silent spans
    (``compress``) without changing any timestamp.
    """
    if mode not in ("spectral", "iq"):
        raise InputError(f"unknown mode {mode!r}")
    seeds = np.random.SeedSequence(scenario.seed).spawn(4)
    rng_trigger = np.random.default_rng(seeds[0])
    rng_jitter = np.random.default_rng(seeds[1])
    rng_freq = np.random.default_rng(seeds[2])
    rng_noise = np.random.default_rng(seeds[3])

    emissions = _schedule_interactions(scenario, rng_trigger, rng_jitter, rng_freq)
    cont_emissions, cont_trace = _schedule_continuous(scenario, rng_freq)
    emissions = sorted(emissions + cont_emissions, key=lambda e: (e.start_s, e.tag_id))
    trace = SimTrace(emissions=tuple(emissions),
                     step_times_s=cont_trace.step_times_s,
                     step_freqs=cont_trace.step_freqs,
                     step_cap_v=cont_trace.step_cap_v)

    rx = scenario.receiver
    bands = scenario.bands()
    tones = [
        dsp.ToneBurst(freq_hz=em.freq_hz, power_db=rx.noise_floor_db + scenario.tag(em.tag_id).snr_db,
                      start_s=em.start_s, end_s=em.end_s)
        for em in emissions if em.fired and em.end_s > em.start_s
    ]

    events: list[dsp.TagEvent] = []
    if mode == "iq":
        stream = dsp.synthesize_iq(tones, noise_floor=rx.noise_floor_db,
                                   duration=scenario.duration_s,
                                   rate=rx.sample_rate_hz,
                                   center_freq=rx.center_freq_hz,
                                   seed=int(rng_noise.integers(2**31)))
        spec = dsp.stft(stream, fft_size=rx.fft_size, hop=rx.hop_samples,
                        averages=rx.averages)
        events = dsp.detect_events(spec, bands, threshold=rx.threshold_db,
                                   debounce=rx.debounce_frames, guard=rx.guard_bins,
                                   neighborhood=rx.neighborhood_bins)
    else:
        frame_dur = rx.frame_duration
        pad = rx.debounce_frames + 2
        for i0, i1 in _frame_segments(emissions, frame_dur, scenario.duration_s, pad, compress):
            seg_tones = [t for t in tones
                         if t.end_s > i0 * frame_dur and t.start_s < i1 * frame_dur]
            spec = dsp.synthesize_spectrogram(
                seg_tones, rate=rx.sample_rate_hz, center_freq=rx.center_freq_hz,
                fft_size=rx.fft_size, noise_floor_db=rx.noise_floor_db,
                n_frames=i1 - i0, frame_start=i0, hop=rx.hop_samples,
                averages=rx.averages)
            events.extend(dsp.detect_events(spec, bands, threshold=rx.threshold_db,
                                            debounce=rx.debounce_frames,
                                            guard=rx.guard_bins,
                                            neighborhood=rx.neighborhood_bins))
        events.sort(key=lambda e: (e.start, e.tag_id))

    truth_entries = sorted(
        (em.truth_t_s, em.tag_id) for em in emissions if em.truth_t_s is not None
    )
    truth = GroundTruthLog(
        entries=tuple((tid, t, "") for t, tid in truth_entries),
        lux_trace=(),
    )
    report = match_events(events, truth, window=scenario.match_window_s)
    return RunResult(scenario=scenario, trace=trace, events=tuple(events),
                     ground_truth=truth, report=report)


# --- sweeps ----------------------------------------------------------------

def _set_path(data: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    node = data
    for k in keys[:-1]:
        if isinstance(node, list):
            node = node[int(k)]
        else:
            node = node[k]
    last = keys[-1]
    if isinstance(node, list):
        node[int(last)] = value
    else:
        node[last] = value


def _sweep_one(args):
    template, dotted, value, mode = args
    data = copy.deepcopy(template)
    _set_path(data, dotted, value)
    result = run(scenario_from_dict(data), mode=mode)
    return {
        "value": value,
        "events": len(result.events),
        "true_events": result.report.total_true,
        "detected": result.report.total_detected,
        "failure_rate_pct": result.report.failure_rate,
        "mean_peak_snr_db": (float(np.mean([e.peak_snr for e in result.events]))
                             if result.events else float("nan")),
    }


def sweep(template: dict, parameter: str, values: list, mode: str = "spectral",
          workers: int = 1) -> list[dict]:
    """One run per parameter value; independent runs, optionally fanned out
    across processes."""
    jobs = [(template, parameter, v, mode) for v in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_one, jobs))
    return [_sweep_one(j) for j in jobs]


def simulate_light_sweep(model: LightResponseModel, lux_values: np.ndarray,
                         noise_sd_hz: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Frequency readings over a lux sweep with seeded measurement noise.

    Only illuminances at or above the shutdown level produce readings.
    """
    rng = np.random.default_rng(seed)
    lux_out, freq_out = [], []
    for lux in lux_values:
        f = frequency_under_light(model, float(lux))
        if f is None:
            continue
        if noise_sd_hz > 0:
            f += rng.normal(0.0, noise_sd_hz)
        lux_out.append(float(lux))
        freq_out.append(f)
    return np.array(lux_out), np.array(freq_out)


# --- JSON round trip -------------------------------------------------------

def scenario_from_dict(data: dict) -> Scenario:
    if data.get("schema") != SCHEMA_VERSION:
        raise InputError(f"unsupported scenario schema {data.get('schema')!r}")
    rx = ReceiverConfig(**data.get("receiver", {}))
    lux_data = data.get("environment", {}).get("lux", {"kind": "constant", "lux": 800.0})
    if "points" in lux_data:
        lux_data = dict(lux_data, points=tuple(tuple(p) for p in lux_data["points"]))
    lux = LuxTraceConfig(**lux_data)
    interactions = tuple(
        ScriptedInteraction(
            t_s=float(e["t_s"]), tag_id=e["tag_id"], stimulus=e.get("stimulus", ""),
            freq_hz=e.get("freq_hz"), miss=bool(e.get("miss", False)))
        for e in data.get("environment", {}).get("interactions", [])
    )
    tags = []
    for t in data["tags"]:
        trigger = None
        if "trigger" in t:
            trig = t["trigger"]
            trigger = TriggerSwitch(kind=trig["kind"], threshold=float(trig["threshold"]),
                                    failure_prob=float(trig.get("failure_prob", 0.0)))
        light = None
        if "light_response" in t:
            lr = t["light_response"]
            light = LightResponseModel(
                anchor_lux=float(lr.get("anchor_lux", 1000.0)),
                anchor_freq=float(lr.get("anchor_freq_hz", 580.054e6)),
                slope=float(lr.get("slope_hz_per_lux", -600.0)),
                shutdown_lux=float(lr.get("shutdown_lux", 500.0)))
        transducer = None
        if "transducer" in t:
            tr = t["transducer"]
            transducer = Transducer(kind=tr["kind"], base_freq=tr.get("base_freq_hz"),
                                    noise_sd=tr.get("noise_sd_hz"))
        tags.append(TagConfig(
            tag_id=t["tag_id"], band_hz=tuple(t["band_hz"]), mode=t.get("mode", "interaction"),
            snr_db=float(t.get("snr_db", 30.0)), trigger=trigger,
            activation_s=float(t.get("activation_s", 0.5)),
            activation_jitter=float(t.get("activation_jitter", ACTIVATION_JITTER)),
            on_time_s=float(t.get("on_time_s", 2.0)),
            cap_f=float(t.get("cap_f", 0.047)), cap_v=float(t.get("cap_v", 1.0)),
            min_emit_v=float(t.get("min_emit_v", 0.25)),
            tdo_power_w=float(t.get("tdo_power_w", 50e-6)),
            trickle_power_w=float(t.get("trickle_power_w", 2e-6)),
            freq_mean_hz=t.get("freq_mean_hz"), freq_sd_hz=float(t.get("freq_sd_hz", 0.0)),
            light_response=light, transducer=transducer, stimulus=t.get("stimulus"),
            duty=float(t.get("duty", 1.0)), noise_sd_hz=float(t.get("noise_sd_hz", 0.0)),
        ))
    return Scenario(
        name=data.get("name", "scenario"),
        duration_s=float(data["duration_s"]),
        tags=tuple(tags),
        interactions=interactions,
        lux=lux,
        receiver=rx,
        time_step_s=float(data.get("time_step_s", 0.01)),
        seed=int(data.get("seed", DEFAULT_SEED)),
        match_window_s=float(data.get("match_window_s", 5.0)),
        allow_band_overlap=bool(data.get("allow_band_overlap", False)),
    )


def load_scenario(path: str | Path) -> Scenario:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot load scenario {path}: {exc}") from exc
    return scenario_from_dict(data)


def load_deployment_scenario() -> Scenario:
    """The shipped 60-hour kitchen deployment replay."""
    return load_scenario(fixture_path(_DEPLOYMENT_SCENARIO))


# --- deployment fixture construction ----------------------------------------

#: Per-tag deployment targets: (events, mean Hz, SD Hz, scripted misses).
DEPLOYMENT_TAGS = {
    "trash_can": dict(n_events=25, mean_hz=511.71e6, sd_hz=0.30e6, misses=(),
                      band_hz=(511.0e6, 512.2e6), trigger=("tilt_ball", 60.0),
                      activation_s=0.68, on_time_s=3.0),
    "soap_dispenser": dict(n_events=19, mean_hz=512.52e6, sd_hz=0.27e6, misses=(),
                           band_hz=(512.2e6, 513.0e6), trigger=("reed", 5.0),
                           activation_s=0.53, on_time_s=2.0),
    "oven_door": dict(n_events=14, mean_hz=513.50e6, sd_hz=0.21e6, misses=(3, 8, 12),
                      band_hz=(513.2e6, 514.0e6), trigger=("tilt_ball", 60.0),
                      activation_s=0.90, on_time_s=6.0),
}

DEPLOYMENT_DURATION_S = 216000.0  # 60 hours


def build_deployment_scenario(seed: int = DEPLOYMENT_SEED) -> dict:
    """Construct the 60-hour deployment replay as a scenario dict.

    58 scripted interactions across three kitchen tags; the three oven
    misses are scripted (mechanical tilt-switch failures).  Event
    frequencies for the events that fire are standardized draws carrying
    exactly the published per-tag mean and sample SD.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(1)[0])
    receiver = ReceiverConfig(sample_rate_hz=8.192e6, center_freq_hz=512.5e6,
                              fft_size=4096, hop=4096, averages=16,
                              noise_floor_db=-95.0)
    bin_hz = receiver.sample_rate_hz / receiver.fft_size

    interactions = []
    for tag_id in sorted(DEPLOYMENT_TAGS):
        cfg = DEPLOYMENT_TAGS[tag_id]
        n = cfg["n_events"]
        # interaction instants: spread through each simulated day, >= 120 s apart
        while True:
            times = np.sort(rng.uniform(600.0, DEPLOYMENT_DURATION_S - 600.0, size=n))
            if np.all(np.diff(times) >= 120.0):
                break
        fired_n = n - len(cfg["misses"])
        lo_z = (cfg["band_hz"][0] + 2 * bin_hz - cfg["mean_hz"]) / cfg["sd_hz"]
        hi_z = (cfg["band_hz"][1] - 2 * bin_hz - cfg["mean_hz"]) / cfg["sd_hz"]
        z = _bounded_standardized(rng, fired_n, lo_z, hi_z)
        freqs = iter(cfg["mean_hz"] + cfg["sd_hz"] * z)
        kind, threshold = cfg["trigger"]
        for k, t in enumerate(times):
            miss = k in cfg["misses"]
            stim = (threshold - 2.0) if kind == "reed" else threshold + 15.0
            entry = {"t_s": round(float(t), 3), "tag_id": tag_id, "stimulus": stim,
                     "miss": miss}
            if not miss:
                entry["freq_hz"] = round(float(next(freqs)), 3)
            interactions.append(entry)
    interactions.sort(key=lambda e: e["t_s"])

    tags = []
    for tag_id in sorted(DEPLOYMENT_TAGS):
        cfg = DEPLOYMENT_TAGS[tag_id]
        kind, threshold = cfg["trigger"]
        tags.append({
            "tag_id": tag_id,
            "band_hz": list(cfg["band_hz"]),
            "mode": "interaction",
            "snr_db": 30.0,
            "trigger": {"kind": kind, "threshold": threshold, "failure_prob": 0.0},
            "activation_s": cfg["activation_s"],
            "on_time_s": cfg["on_time_s"],
            "freq_mean_hz": cfg["mean_hz"],
            "freq_sd_hz": cfg["sd_hz"],
        })
    return {
        "schema": SCHEMA_VERSION,
        "name": "deployment_60h",
        "seed": seed,
        "duration_s": DEPLOYMENT_DURATION_S,
        "time_step_s": 0.01,
        "receiver": {
            "sample_rate_hz": receiver.sample_rate_hz,
            "center_freq_hz": receiver.center_freq_hz,
            "fft_size": receiver.fft_size,
            "hop": receiver.hop,
            "averages": receiver.averages,
            "noise_floor_db": receiver.noise_floor_db,
        },
        "environment": {
            "lux": {"kind": "daily_cycle", "min_lux": 30.0, "max_lux": 350.0,
                    "period_s": 86400.0, "phase_s": 28800.0},
            "interactions": interactions,
        },
        "tags": tags,
    }
