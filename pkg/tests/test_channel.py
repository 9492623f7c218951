import math

import pytest

from radiogami.channel import (
    CompliancePolicy,
    FloorModel,
    PathLossModel,
    compliance_check,
    dbm_to_watts,
    fit_path_loss,
    floor_snr,
    load_default_floor_model,
    max_range,
    snr_at,
    snr_db,
)
from radiogami.errors import DomainError, ModelError


class TestSnrDb:
    def test_ratio_ten(self):
        assert snr_db(10.0, 1.0) == pytest.approx(10.0)

    def test_ratio_one(self):
        assert snr_db(5.0, 5.0) == 0.0

    def test_peak_reading_inverted(self):
        assert snr_db(10 ** 4.53, 1.0) == pytest.approx(45.3)

    def test_positive_powers_required(self):
        with pytest.raises(ValueError):
            snr_db(0.0, 1.0)
        with pytest.raises(ValueError):
            snr_db(1.0, -1.0)


class TestPathLossFit:
    def test_25pd_exponent(self):
        # two-point solve: n = (45.3 - 5) / (10 log10 45.73)
        model = fit_path_loss((1.0, 45.3), (45.73, 5.0))
        expected_n = (45.3 - 5.0) / (10.0 * math.log10(45.73))
        assert model.exponent == pytest.approx(expected_n, rel=1e-12)
        assert model.exponent == pytest.approx(2.427, abs=5e-4)
        assert model.snr0 == pytest.approx(45.3)

    def test_11pd_exponent(self):
        model = fit_path_loss((1.0, 34.9), (27.44, 5.0))
        expected_n = (34.9 - 5.0) / (10.0 * math.log10(27.44))
        assert model.exponent == pytest.approx(expected_n, rel=1e-12)
        assert model.exponent == pytest.approx(2.079, abs=5e-4)

    def test_flat_anchors_rejected(self):
        with pytest.raises(ValueError):
            fit_path_loss((1.0, 20.0), (10.0, 20.0))
        with pytest.raises(ValueError):
            fit_path_loss((5.0, 20.0), (5.0, 10.0))


class TestSnrAtAndRange:
    def test_reference_distance(self):
        model = PathLossModel(snr0=45.3, exponent=2.4)
        assert snr_at(model, 1.0) == 45.3

    def test_far_anchor_by_construction(self):
        model = fit_path_loss((1.0, 45.3), (45.73, 5.0))
        assert snr_at(model, 45.73) == pytest.approx(5.0, abs=1e-12)

    def test_monotone_decreasing(self):
        model = PathLossModel(snr0=45.3, exponent=2.4)
        snrs = [snr_at(model, d) for d in (1, 2, 5, 10, 20, 50)]
        assert all(a > b for a, b in zip(snrs, snrs[1:]))

    def test_below_reference_rejected(self):
        with pytest.raises(DomainError):
            snr_at(PathLossModel(45.3, 2.4), 0.5)

    def test_published_ranges(self):
        m25 = fit_path_loss((1.0, 45.3), (45.73, 5.0))
        m11 = fit_path_loss((1.0, 34.9), (27.44, 5.0))
        assert max_range(m25) == pytest.approx(45.73, abs=1e-9)
        assert max_range(m11) == pytest.approx(27.44, abs=1e-9)

    def test_threshold_at_reference(self):
        model = PathLossModel(snr0=5.0, exponent=2.0)
        assert max_range(model) == 1.0

    def test_threshold_above_reference_snr_rejected(self):
        with pytest.raises(ModelError):
            max_range(PathLossModel(snr0=4.0, exponent=2.0))


class TestFloorModel:
    def test_published_floor_table(self):
        model = load_default_floor_model()
        expected = {0: (43.6, True), 1: (19.5, True), -1: (16.3, True),
                    -2: (4.0, False), 2: (5.0, False)}
        for off, (snr, detectable) in expected.items():
            got_snr, got_det = floor_snr(model, off)
            assert got_snr == snr
            assert got_det is detectable

    def test_five_db_is_strictly_undetectable(self):
        model = load_default_floor_model()
        snr, detectable = floor_snr(model, 2)
        assert snr == 5.0 and not detectable

    def test_missing_offset(self):
        with pytest.raises(DomainError):
            floor_snr(load_default_floor_model(), 3)

    def test_asymmetry_preserved(self):
        model = load_default_floor_model()
        assert floor_snr(model, 1)[0] != floor_snr(model, -1)[0]

    def test_offset_zero_must_be_max(self):
        with pytest.raises(ValueError):
            FloorModel(per_floor_snr={0: 10.0, 1: 20.0})


class TestCompliance:
    def test_published_operating_point(self):
        verdict = compliance_check(CompliancePolicy(), 580e6, -50.0)
        assert verdict.passed and verdict.band_ok and verdict.power_ok

    def test_band_violation(self):
        verdict = compliance_check(CompliancePolicy(), 610e6, -50.0)
        assert not verdict.passed and not verdict.band_ok and verdict.power_ok

    def test_power_violation(self):
        # +17 dBm is ~50 mW, above the 40 mW cap
        assert dbm_to_watts(17.0) == pytest.approx(0.0501, abs=2e-4)
        verdict = compliance_check(CompliancePolicy(), 580e6, 17.0)
        assert not verdict.passed and verdict.band_ok and not verdict.power_ok
