import numpy as np
import pytest

from radiogami.dsp import (
    IQStream,
    TagEvent,
    ToneBurst,
    band_bins,
    detect_events,
    estimate_snr,
    overlap_analysis,
    read_iq,
    stft,
    synthesize_iq,
    synthesize_spectrogram,
    window_coefficients,
    write_event_csv,
    write_iq,
)
from radiogami.errors import DomainError
from radiogami.fixtures import paper_data_root, read_csv

RATE = 2.56e6
FFT = 4096
BIN = RATE / FFT  # 625 Hz


class TestWindow:
    def test_rectangular_all_ones(self):
        assert np.all(window_coefficients("rectangular", 64) == 1.0)

    def test_bh4_endpoints(self):
        w = window_coefficients("blackman_harris_4", 4096)
        assert w[0] == pytest.approx(6e-5, rel=1e-6)
        assert w[-1] == pytest.approx(6e-5, rel=1e-6)

    def test_symmetry(self):
        w = window_coefficients("blackman_harris_4", 513)
        assert np.allclose(w, w[::-1], atol=1e-15)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            window_coefficients("hann", 8)


class TestSynthesizeIQ:
    def test_pure_noise_spectrum_is_flat(self):
        stream = synthesize_iq([], noise_floor=-90.0, duration=0.1, seed=1)
        spec = stft(stream, averages=16)
        profile = 10 * np.log10(np.mean(10 ** (spec.power_db / 10.0), axis=0))
        octiles = np.array_split(profile, 8)
        means = [np.mean(o) for o in octiles]
        assert max(means) - min(means) < 3.0

    def test_single_tone_lands_within_one_bin(self):
        f = 100e3
        stream = synthesize_iq([ToneBurst(freq_hz=f, power_db=-50.0)],
                               noise_floor=-90.0, duration=0.05, seed=2)
        spec = stft(stream)
        row = spec.power_db.mean(axis=0)
        peak = spec.freqs_hz[int(np.argmax(row))]
        assert abs(peak - f) <= BIN

    def test_two_tones_give_two_peaks(self):
        tones = [ToneBurst(-400e3, -50.0), ToneBurst(600e3, -50.0)]
        stream = synthesize_iq(tones, noise_floor=-90.0, duration=0.05, seed=3)
        spec = stft(stream)
        row = spec.power_db.mean(axis=0)
        i1 = int(np.argmax(row))
        masked = row.copy()
        masked[max(0, i1 - 16):i1 + 16] = -999
        i2 = int(np.argmax(masked))
        found = sorted([spec.freqs_hz[i1], spec.freqs_hz[i2]])
        assert abs(found[0] - -400e3) <= BIN and abs(found[1] - 600e3) <= BIN

    def test_out_of_span_tone_rejected(self):
        with pytest.raises(DomainError):
            synthesize_iq([ToneBurst(2e6, -50.0)], -90.0, 0.01, seed=0)

    def test_deterministic_given_seed(self):
        a = synthesize_iq([ToneBurst(1e5, -50)], -90.0, 0.01, seed=9)
        b = synthesize_iq([ToneBurst(1e5, -50)], -90.0, 0.01, seed=9)
        assert np.array_equal(a.samples, b.samples)


class TestStft:
    def test_constant_tone_power_stable_across_frames(self):
        stream = synthesize_iq([ToneBurst(100e3, -40.0)], noise_floor=-95.0,
                               duration=0.1, seed=4)
        spec = stft(stream)
        bin_idx = int(np.argmin(np.abs(spec.freqs_hz - 100e3)))
        peaks = spec.power_db[:, bin_idx]
        assert peaks.max() - peaks.min() < 0.5

    def test_parseval(self):
        # frequency-domain power must equal windowed time-domain power
        rng = np.random.default_rng(5)
        x = rng.normal(size=FFT) + 1j * rng.normal(size=FFT)
        stream = IQStream(samples=x, sample_rate=RATE)
        w = window_coefficients("blackman_harris_4", FFT)
        spec = stft(stream, fft_size=FFT, hop=FFT)
        freq_power = np.sum(10 ** (spec.power_db[0] / 10.0)) * w.sum() ** 2 / FFT
        time_power = np.sum(np.abs(w * x) ** 2)
        assert freq_power == pytest.approx(time_power, rel=1e-6)

    def test_silence_sits_at_floor(self):
        stream = synthesize_iq([], noise_floor=-80.0, duration=0.05, seed=6)
        spec = stft(stream, averages=16)
        mean_db = 10 * np.log10(np.mean(10 ** (spec.power_db / 10.0)))
        assert mean_db == pytest.approx(-80.0, abs=1.0)

    def test_bin_width_invariant(self):
        stream = synthesize_iq([], noise_floor=-80.0, duration=0.01, seed=0)
        spec = stft(stream)
        assert spec.bin_hz * spec.fft_size == pytest.approx(spec.sample_rate)

    def test_too_short_stream(self):
        with pytest.raises(ValueError):
            stft(IQStream(samples=np.zeros(16, dtype=complex), sample_rate=RATE))


class TestEstimateSnr:
    def test_synthesized_snr_recovered_within_1db(self):
        stream = synthesize_iq([ToneBurst(100e3, -49.7)], noise_floor=-95.0,
                               duration=0.2, seed=7)
        spec = stft(stream, averages=16)
        est = estimate_snr(spec.power_db.mean(axis=0), averages=16 * len(spec.power_db))
        assert est.snr == pytest.approx(45.3, abs=1.0)

    def test_pure_noise_below_threshold(self):
        stream = synthesize_iq([], noise_floor=-95.0, duration=0.1, seed=8)
        spec = stft(stream, averages=16)
        probe = spec.fft_size // 3
        for row in spec.power_db[:4]:
            est = estimate_snr(row, peak_bin=probe, averages=16)
            assert est.snr < 5.0

    def test_second_tone_outside_neighborhood_ignored(self):
        tones = [ToneBurst(100e3, -50.0), ToneBurst(900e3, -50.0)]
        one = synthesize_iq(tones[:1], noise_floor=-95.0, duration=0.05, seed=9)
        both = synthesize_iq(tones, noise_floor=-95.0, duration=0.05, seed=9)
        kw = dict(guard=8, neighborhood=64, averages=8)
        spec_one = stft(one, averages=8)
        spec_two = stft(both, averages=8)
        peak = int(np.argmin(np.abs(spec_one.freqs_hz - 100e3)))
        a = estimate_snr(spec_one.power_db[0], peak_bin=peak, **kw)
        b = estimate_snr(spec_two.power_db[0], peak_bin=peak, **kw)
        assert a.snr == pytest.approx(b.snr, abs=0.5)

    def test_snr_identity(self):
        row = np.full(1024, -90.0)
        row[300] = -50.0
        est = estimate_snr(row, guard=4, neighborhood=64)
        assert est.snr == est.peak_power - est.noise_power

    def test_guard_bound(self):
        with pytest.raises(ValueError):
            estimate_snr(np.zeros(64), guard=16)


def _burst_spec(bursts, duration=4.0, floor=-90.0):
    """Deterministic spectral-mode spectrogram for detector tests."""
    return synthesize_spectrogram(
        bursts, rate=1.024e6, center_freq=500e6, fft_size=1024,
        noise_floor_db=floor, n_frames=int(duration / (1024 * 4 / 1.024e6)),
        hop=1024, averages=4)


class TestDetectEvents:
    BANDS = [("a", (499.8e6, 500.0e6)), ("b", (500.0e6, 500.2e6))]

    def test_soap_burst_duration(self):
        # 2 s burst: recovered duration within two frame periods
        spec = _burst_spec([ToneBurst(499.9e6, -70.0, 1.0, 3.0)])
        events = detect_events(spec, self.BANDS)
        assert len(events) == 1
        ev = events[0]
        assert ev.tag_id == "a"
        assert ev.end - ev.start == pytest.approx(2.0, abs=2 * spec.frame_duration)

    def test_no_tone_no_events(self):
        spec = _burst_spec([])
        assert detect_events(spec, self.BANDS) == []

    def test_simultaneous_tones_in_two_bands(self):
        spec = _burst_spec([ToneBurst(499.9e6, -70.0, 1.0, 3.0),
                            ToneBurst(500.1e6, -70.0, 1.0, 3.0)])
        events = detect_events(spec, self.BANDS)
        assert {e.tag_id for e in events} == {"a", "b"}
        assert len(events) == 2
        assert events[0].start == pytest.approx(events[1].start, abs=1e-9)

    def test_event_attributes(self):
        spec = _burst_spec([ToneBurst(499.9e6, -70.0, 1.0, 3.0)])
        ev = detect_events(spec, self.BANDS)[0]
        assert ev.band[0] <= ev.mean_freq < ev.band[1]
        assert ev.peak_snr == pytest.approx(20.0, abs=1.0)
        assert ev.start < ev.end

    def test_boundary_peak_maps_to_exactly_one_band(self):
        # tone exactly on the shared band edge: half-open intervals put it in b
        spec = _burst_spec([ToneBurst(500.0e6, -70.0, 1.0, 3.0)])
        events = detect_events(spec, self.BANDS)
        assert [e.tag_id for e in events] == ["b"]

    def test_debounce_suppresses_single_frame_blip(self):
        spec = _burst_spec([ToneBurst(499.9e6, -70.0, 1.0, 1.003)])
        assert detect_events(spec, self.BANDS, debounce=3) == []

    def test_band_outside_span_rejected(self):
        spec = _burst_spec([])
        with pytest.raises(DomainError):
            detect_events(spec, [("x", (600e6, 601e6))])


class TestOverlapAnalysis:
    def test_touching_bands_do_not_overlap(self):
        bands = [("trash", (511.0e6, 512.2e6)), ("soap", (512.2e6, 513.0e6))]
        assert overlap_analysis(bands) == []

    def test_published_day2_ranges_overlap(self):
        rows = read_csv(paper_data_root() / "day2_observed_ranges.csv")
        bands = [(r["object"], (float(r["min_mhz"]) * 1e6, float(r["max_mhz"]) * 1e6))
                 for r in rows]
        overlaps = overlap_analysis(bands)
        assert len(overlaps) == 1
        a, b, span = overlaps[0]
        assert {a, b} == {"trash_can", "soap_dispenser"}
        assert span[0] == pytest.approx(512.0e6)
        assert span[1] == pytest.approx(512.2e6)

    def test_identical_bands_full_overlap(self):
        bands = [("x", (1.0, 2.0)), ("y", (1.0, 2.0))]
        assert overlap_analysis(bands) == [("x", "y", (1.0, 2.0))]


class TestIO:
    def test_cf32_round_trip(self, tmp_path):
        stream = synthesize_iq([ToneBurst(580.1e6, -50)], -90.0, 0.01, seed=11,
                               center_freq=580e6)
        path = tmp_path / "capture.cf32"
        write_iq(path, stream)
        back = read_iq(path)
        assert back.sample_rate == stream.sample_rate
        assert back.center_freq == stream.center_freq
        assert np.allclose(back.samples, stream.samples, atol=1e-6)

    def test_cu8_round_trip(self, tmp_path):
        stream = synthesize_iq([], -60.0, 0.01, seed=12)
        path = tmp_path / "capture.cu8"
        write_iq(path, stream)
        back = read_iq(path)
        assert np.allclose(back.samples, stream.samples, atol=1.0 / 127.5)

    def test_missing_sidecar(self, tmp_path):
        path = tmp_path / "x.cf32"
        np.zeros(8, dtype="<f4").tofile(path)
        from radiogami.errors import InputError
        with pytest.raises(InputError):
            read_iq(path)

    def test_event_csv_header(self, tmp_path):
        ev = TagEvent("a", (1.0, 2.0), 0.0, 1.0, 1.5, 20.0)
        path = tmp_path / "events.csv"
        write_event_csv(path, [ev])
        header = path.read_text().splitlines()[0]
        assert header == "tag_id,start_s,end_s,mean_freq_hz,peak_snr_db"


class TestSpectralSynthesis:
    def test_tone_power_and_bin(self):
        spec = _burst_spec([ToneBurst(499.9e6, -70.0, 0.0, 10.0)], floor=-90.0)
        b = int(np.argmin(np.abs(spec.freqs_hz - 499.9e6)))
        assert spec.power_db[0, b] == pytest.approx(-70.0, abs=0.05)

    def test_partial_frame_coverage_scales_power(self):
        frame = 1024 * 4 / 1.024e6
        spec = _burst_spec([ToneBurst(499.9e6, -70.0, 0.0, frame / 2.0)], floor=-200.0)
        b = int(np.argmin(np.abs(spec.freqs_hz - 499.9e6)))
        assert spec.power_db[0, b] == pytest.approx(-73.0, abs=0.1)

    def test_band_bins_half_open(self):
        spec = _burst_spec([])
        i0, i1 = band_bins(spec, (500.0e6, 500.2e6))
        assert spec.freqs_hz[i0] >= 500.0e6
        assert spec.freqs_hz[i1 - 1] < 500.2e6
