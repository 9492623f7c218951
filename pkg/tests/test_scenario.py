import json

import numpy as np
import pytest

from radiogami.errors import InputError
from radiogami.scenario import (
    DEPLOYMENT_SEED,
    LuxTraceConfig,
    ReceiverConfig,
    Scenario,
    ScriptedInteraction,
    TagConfig,
    build_deployment_scenario,
    load_deployment_scenario,
    load_scenario,
    run,
    scenario_from_dict,
    simulate_light_sweep,
    step,
    sweep,
)
from radiogami.switching import LightResponseModel
from radiogami.transducers import TriggerSwitch

RX = ReceiverConfig(sample_rate_hz=1.024e6, center_freq_hz=500e6, fft_size=1024,
                    hop=1024, averages=16, noise_floor_db=-90.0)
FRAME = RX.frame_duration  # 16 ms


def _bin_center(freq):
    bin_hz = RX.sample_rate_hz / RX.fft_size
    return RX.center_freq_hz + round((freq - RX.center_freq_hz) / bin_hz) * bin_hz


def _interaction_tag(tag_id, band, **kw):
    defaults = dict(mode="interaction", snr_db=25.0,
                    trigger=TriggerSwitch(kind="reed", threshold=5.0),
                    activation_s=0.5, on_time_s=2.0)
    defaults.update(kw)
    return TagConfig(tag_id=tag_id, band_hz=band, **defaults)


def _small_scenario(seed=101, events=None, duration=20.0, **tag_kw):
    tags = (
        _interaction_tag("a", (499.7e6, 499.95e6), **tag_kw),
        _interaction_tag("b", (500.05e6, 500.3e6), **tag_kw),
    )
    if events is None:
        events = (
            ScriptedInteraction(t_s=2.0, tag_id="a", stimulus=3.0,
                                freq_hz=_bin_center(499.8e6)),
            ScriptedInteraction(t_s=8.0, tag_id="b", stimulus=3.0,
                                freq_hz=_bin_center(500.2e6)),
            ScriptedInteraction(t_s=14.0, tag_id="a", stimulus=3.0,
                                freq_hz=_bin_center(499.9e6)),
        )
    return Scenario(name="small", duration_s=duration, tags=tags,
                    interactions=events, receiver=RX, seed=seed)


class TestStep:
    def _continuous(self, lux=1000.0):
        tag = TagConfig(tag_id="c", band_hz=(579e6, 581e6), mode="continuous",
                        light_response=LightResponseModel(), cap_f=0.47, cap_v=0.26)
        return Scenario(name="cont", duration_s=10.0, tags=(tag,), receiver=RX,
                        lux=LuxTraceConfig(kind="constant", lux=lux))

    def test_steady_light_emits_anchor_frequency(self):
        out = step(self._continuous(lux=1000.0), 1.0)
        assert out["c"] == pytest.approx(580.054e6)

    def test_below_shutdown_goes_silent(self):
        assert step(self._continuous(lux=499.0), 1.0)["c"] is None

    def test_idle_interaction_tag_silent_regardless_of_light(self):
        sc = _small_scenario()
        assert step(sc, 1.0) == {"a": None, "b": None}


class TestRunDeterminism:
    def test_same_seed_bit_identical_logs(self):
        r1 = run(_small_scenario(seed=7))
        r2 = run(_small_scenario(seed=7))
        assert r1.events == r2.events

    def test_different_seed_changes_jitter(self):
        r1 = run(_small_scenario(seed=7))
        r2 = run(_small_scenario(seed=8))
        assert [e.start for e in r1.events] != [e.start for e in r2.events]


class TestCompression:
    def test_compressed_and_full_runs_agree(self):
        compressed = run(_small_scenario(), compress=True)
        full = run(_small_scenario(), compress=False)
        assert compressed.events == full.events

    def test_empty_script_zero_events(self):
        sc = _small_scenario(events=())
        assert run(sc).events == ()


class TestSpectralIqEquivalence:
    def test_shared_scenario_same_event_log(self):
        # frame-aligned bursts at bin centers; logs must agree exactly on
        # (tag, start, end, mean frequency); SNR is noise-realization bound
        events = (
            ScriptedInteraction(t_s=125 * FRAME, tag_id="a", stimulus=3.0,
                                freq_hz=_bin_center(499.8e6)),
            ScriptedInteraction(t_s=500 * FRAME, tag_id="b", stimulus=3.0,
                                freq_hz=_bin_center(500.2e6)),
        )
        sc = _small_scenario(events=events, duration=16.0, activation_jitter=0.0,
                             activation_s=FRAME * 10, on_time_s=FRAME * 125)
        spectral = run(sc, mode="spectral", compress=False)
        iq = run(sc, mode="iq")
        key = lambda evs: [(e.tag_id, e.start, e.end, e.mean_freq) for e in evs]
        assert key(spectral.events) == key(iq.events)
        for s, q in zip(spectral.events, iq.events):
            assert s.peak_snr == pytest.approx(q.peak_snr, abs=1.5)

    def test_activation_jitter_frame_alignment(self):
        # jitter multiplies the activation delay; whole-frame delays stay aligned
        sc = _small_scenario(activation_s=FRAME * 10)
        for em in run(sc).trace.emissions:
            assert em.start_s > em.truth_t_s


class TestEnergyCausality:
    def test_depleted_cap_blocks_emission(self):
        sc = _small_scenario(cap_v=0.2, min_emit_v=0.25)
        result = run(sc)
        assert result.events == ()
        assert all(not em.fired for em in result.trace.emissions)

    def test_continuous_tag_stops_when_cap_drains(self):
        tag = TagConfig(tag_id="c", band_hz=(579e6, 581e6), mode="continuous",
                        light_response=LightResponseModel(), photodiodes=25,
                        cap_f=5e-4, cap_v=0.26, min_emit_v=0.25, tdo_power_w=50e-6)
        sc = Scenario(name="drain", duration_s=2.0, tags=(tag,), receiver=RX,
                      lux=LuxTraceConfig(kind="constant", lux=600.0),
                      time_step_s=0.01, seed=5)
        result = run(sc, compress=True)
        caps = result.trace.step_cap_v["c"]
        freqs = result.trace.step_freqs["c"]
        assert np.isnan(freqs[caps < 0.25]).all()
        assert np.isnan(freqs).any() and not np.isnan(freqs).all()


class TestBandHygiene:
    def test_overlapping_bands_rejected_by_default(self):
        with pytest.raises(ValueError, match="overlap"):
            Scenario(name="x", duration_s=1.0, tags=(
                _interaction_tag("a", (499.0e6, 500.0e6)),
                _interaction_tag("b", (499.5e6, 500.5e6)),
            ), receiver=RX)

    def test_disjoint_bands_no_misattribution(self):
        result = run(_small_scenario())
        by_tag = {em.tag_id: [] for em in result.trace.emissions}
        for em in result.trace.emissions:
            by_tag[em.tag_id].append(em.freq_hz)
        for ev in result.events:
            tag = result.scenario.tag(ev.tag_id)
            assert tag.band_hz[0] <= ev.mean_freq < tag.band_hz[1]


class TestSweep:
    def _template(self):
        return {
            "schema": 1, "name": "tpl", "duration_s": 10.0, "seed": 3,
            "receiver": {"sample_rate_hz": 1.024e6, "center_freq_hz": 500e6,
                         "fft_size": 1024, "hop": 1024, "averages": 16,
                         "noise_floor_db": -90.0},
            "environment": {"interactions": [
                {"t_s": 2.0, "tag_id": "a", "stimulus": 3.0, "freq_hz": 499.8e6},
            ]},
            "tags": [{"tag_id": "a", "band_hz": [499.7e6, 499.95e6],
                      "trigger": {"kind": "reed", "threshold": 5.0},
                      "activation_s": 0.5, "on_time_s": 2.0, "snr_db": 25.0}],
        }

    def test_sweep_rows(self):
        rows = sweep(self._template(), "tags.0.snr_db", [20.0, 30.0])
        assert [r["value"] for r in rows] == [20.0, 30.0]
        assert all(r["detected"] == 1 for r in rows)
        assert rows[1]["mean_peak_snr_db"] > rows[0]["mean_peak_snr_db"]

    def test_parallel_matches_serial(self):
        rows1 = sweep(self._template(), "tags.0.snr_db", [20.0, 30.0], workers=1)
        rows2 = sweep(self._template(), "tags.0.snr_db", [20.0, 30.0], workers=2)
        assert rows1 == rows2


class TestScenarioFiles:
    def test_json_round_trip(self, tmp_path):
        data = TestSweep()._template()
        path = tmp_path / "sc.json"
        path.write_text(json.dumps(data))
        assert load_scenario(path) == scenario_from_dict(data)

    def test_schema_version_enforced(self):
        with pytest.raises(InputError, match="schema"):
            scenario_from_dict({"schema": 2, "duration_s": 1.0, "tags": []})

    def test_deployment_fixture_matches_builder(self):
        assert load_deployment_scenario() == scenario_from_dict(build_deployment_scenario())


class TestDeploymentSmoke:
    def test_counts(self):
        result = run(load_deployment_scenario())
        assert result.report.total_true == 58
        assert result.report.total_detected == 55
        assert result.report.total_false_positives == 0
        assert result.report.per_tag["oven_door"].misses == 3


class TestLightSweepHelper:
    def test_noiseless_is_exact_line(self):
        lux, freq = simulate_light_sweep(LightResponseModel(), np.arange(500, 1001, 50),
                                         noise_sd_hz=0.0, seed=0)
        slopes = np.diff(freq) / np.diff(lux)
        assert np.allclose(slopes, -600.0)

    def test_below_shutdown_dropped(self):
        lux, _ = simulate_light_sweep(LightResponseModel(), np.arange(300, 701, 100),
                                      noise_sd_hz=0.0, seed=0)
        assert lux.min() >= 500.0
