import math

import numpy as np
import pytest

from tenscomp.metrics import (
    PSNR_CAP,
    ergas,
    evaluate,
    psnr,
    rel_error,
    ssim,
)


class TestPsnr:
    def test_identical_is_infinite(self):
        x = np.random.default_rng(0).random((8, 8, 3))
        assert math.isinf(psnr(x, x))
        assert PSNR_CAP == 999.0

    def test_hand_value_20db(self):
        # single band, reference peak 1.0, MSE 0.01 -> 20 dB
        ref = np.zeros((10, 10, 1))
        ref[0, 0, 0] = 1.0
        x = ref + 0.1
        assert psnr(x, ref) == pytest.approx(20.0)

    def test_scale_invariance(self):
        rng = np.random.default_rng(1)
        ref = rng.random((6, 7, 2)) + 0.5
        x = ref + 0.05 * rng.standard_normal(ref.shape)
        assert psnr(2 * x, 2 * ref) == pytest.approx(psnr(x, ref), rel=1e-12)

    def test_monotone_in_error(self):
        ref = np.ones((5, 5, 2))
        e = np.random.default_rng(2).standard_normal(ref.shape)
        values = [psnr(ref + s * e, ref) for s in (0.01, 0.1, 0.5)]
        assert values[0] > values[1] > values[2]

    def test_band_mean_over_trailing_modes(self):
        # order-4: bands are channel x frame slices
        rng = np.random.default_rng(3)
        ref = rng.random((6, 6, 2, 3))
        x = ref + 0.1 * rng.standard_normal(ref.shape)
        flat_ref = ref.reshape(6, 6, -1)
        flat_x = x.reshape(6, 6, -1)
        per_band = [
            psnr(flat_x[:, :, b:b + 1], flat_ref[:, :, b:b + 1]) for b in range(6)
        ]
        assert psnr(x, ref) == pytest.approx(np.mean(per_band), rel=1e-12)

    def test_global_peak_option(self):
        rng = np.random.default_rng(20)
        ref = rng.random((6, 6, 3))
        ref[:, :, 0] *= 4.0  # distinct per-band peaks
        x = ref + 0.1 * rng.standard_normal(ref.shape)
        assert psnr(x, ref, peak="global") > psnr(x, ref, peak="band")
        with pytest.raises(ValueError):
            psnr(x, ref, peak="maximum")

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            psnr(np.ones((2, 2)), np.ones((2, 3)))


class TestSsim:
    def test_identical_is_exactly_one(self):
        x = np.random.default_rng(4).random((16, 16, 2))
        assert ssim(x, x) == 1.0

    def test_sign_flip_on_zero_mean_band(self):
        # global-statistics path (band below window size): zero means leave
        # only the covariance term, whose sign flips with the estimate
        rng = np.random.default_rng(5)
        ref = rng.standard_normal((8, 8, 1))
        ref -= ref.mean()
        assert ssim(-ref, ref) < 0.0

    def test_constant_bands_reduce_to_luminance_term(self):
        c1v, c2v = 0.4, 0.7
        x = np.full((16, 16, 1), c1v)
        ref = np.full((16, 16, 1), c2v)
        # zero dynamic range falls back to 1.0; K1=0.01 -> C1 = 1e-4
        expect = (2 * c1v * c2v + 1e-4) / (c1v**2 + c2v**2 + 1e-4)
        assert ssim(x, ref) == pytest.approx(expect, rel=1e-9)

    def test_small_band_falls_back_to_global_stats(self):
        rng = np.random.default_rng(6)
        ref = rng.random((5, 5, 2))  # smaller than the 11x11 window
        x = ref + 0.1 * rng.standard_normal(ref.shape)
        value = ssim(x, ref)
        assert -1.0 <= value <= 1.0
        assert ssim(ref, ref) == 1.0

    def test_bounded_by_one_in_magnitude(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            ref = rng.standard_normal((20, 20, 2))
            x = rng.standard_normal((20, 20, 2))
            assert abs(ssim(x, ref)) <= 1.0 + 1e-12


class TestErgas:
    def test_identical_is_zero(self):
        x = np.random.default_rng(8).random((8, 8, 3)) + 1.0
        assert ergas(x, x) == 0.0

    def test_hand_value(self):
        # single band, mean 1, MSE 0.01 -> 100*sqrt(0.01) = 10
        ref = np.ones((10, 10, 1))
        x = ref + 0.1
        assert ergas(x, ref) == pytest.approx(10.0)

    def test_scale_invariance(self):
        rng = np.random.default_rng(9)
        ref = rng.random((6, 6, 2)) + 1.0
        x = ref + 0.05 * rng.standard_normal(ref.shape)
        assert ergas(3 * x, 3 * ref) == pytest.approx(ergas(x, ref), rel=1e-12)

    def test_zero_mean_band_excluded_with_warning(self):
        ref = np.ones((4, 4, 2))
        ref[:, :, 1] = 0.0
        x = ref + 0.1
        with pytest.warns(UserWarning, match="zero-mean"):
            value = ergas(x, ref)
        assert value == pytest.approx(10.0)

    def test_all_zero_mean_raises(self):
        ref = np.zeros((4, 4, 1))
        with pytest.warns(UserWarning):
            with pytest.raises(ValueError):
                ergas(ref + 0.1, ref)


class TestRelError:
    def test_identical(self):
        x = np.random.default_rng(10).random((5, 5))
        assert rel_error(x, x) == 0.0

    def test_zero_estimate(self):
        ref = np.random.default_rng(11).random((5, 5)) + 0.1
        assert rel_error(np.zeros_like(ref), ref) == pytest.approx(1.0)

    def test_scaling_case(self):
        ref = np.random.default_rng(12).random((4, 4, 2)) + 0.1
        assert rel_error(1.1 * ref, ref) == pytest.approx(0.1)

    def test_zero_reference_rejected(self):
        with pytest.raises(ValueError):
            rel_error(np.ones((2, 2)), np.zeros((2, 2)))


class TestEvaluate:
    def test_matches_individual_metrics(self):
        rng = np.random.default_rng(13)
        ref = rng.random((12, 12, 3)) + 0.5
        x = ref + 0.05 * rng.standard_normal(ref.shape)
        report = evaluate(x, ref)
        assert report.psnr == pytest.approx(psnr(x, ref), rel=1e-12)
        assert report.ssim == pytest.approx(ssim(x, ref), rel=1e-12)
        assert report.ergas == pytest.approx(ergas(x, ref), rel=1e-12)
        assert report.rel_error == pytest.approx(rel_error(x, ref), rel=1e-12)
        assert len(report.psnr_bands) == 3

    def test_identical_inputs_invariants(self):
        x = np.random.default_rng(14).random((12, 12, 2)) + 1.0
        report = evaluate(x, x)
        assert report.ssim == 1.0
        assert report.ergas == 0.0
        assert report.rel_error == 0.0
        assert math.isinf(report.psnr)
