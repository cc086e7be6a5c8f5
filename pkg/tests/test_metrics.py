import math

import numpy as np
import pytest

from src.exceptions import DegenerateImageError, DimensionMismatchError, EmptyDatasetError
from src.imaging.image import Image
from src.metrics.scores import ChannelId, ScoreReport, cmse, cpsnr_report, mse_channel, psnr, psnr_channel


def _naive_mse(ref: np.ndarray, est: np.ndarray, k: int) -> float:
    total = 0.0
    h, w, _ = ref.shape
    for i in range(h):
        for j in range(w):
            d = est[i, j, k] - ref[i, j, k]
            total += d * d
    return total / (h * w)


def test_mse_matches_triple_loop_oracle():
    rng = np.random.default_rng(0)
    for _ in range(100):
        ref = rng.random((16, 16, 3))
        est = rng.random((16, 16, 3))
        a, b = Image(ref), Image(est)
        oracles = [_naive_mse(ref, est, k) for k in range(3)]
        for k in ChannelId:
            assert mse_channel(a, b, k) == pytest.approx(oracles[k], rel=1e-15)
        assert cmse(a, b) == pytest.approx(sum(oracles) / 3.0, rel=1e-15)


def test_mse_single_pixel():
    ref = Image(np.zeros((1, 1, 3)))
    est = Image(np.array([[[0.5, 0.0, 0.0]]]))
    assert mse_channel(ref, est, ChannelId.R) == 0.25
    assert mse_channel(ref, est, ChannelId.G) == 0.0
    assert cmse(ref, est) == pytest.approx(0.25 / 3)


def test_mse_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        cmse(Image(np.zeros((2, 2, 3))), Image(np.zeros((2, 3, 3))))


def test_psnr_values():
    assert psnr(1.0, 255) == pytest.approx(48.1308, abs=1e-3)
    assert psnr(0.01) == pytest.approx(20.0)
    assert psnr(0.0) == math.inf
    with pytest.raises(ValueError):
        psnr(-1.0)


def test_psnr_channel():
    ref = Image(np.zeros((2, 2, 3)))
    est = Image(np.full((2, 2, 3), 0.1))
    assert psnr_channel(ref, est, ChannelId.B) == pytest.approx(20.0)


def test_cpsnr_is_mean_of_per_image_psnr(random_image):
    refs = [random_image(8, 8) for _ in range(3)]
    ests = [random_image(8, 8) for _ in range(3)]
    report = cpsnr_report(refs, ests)
    expected = [psnr(cmse(r, e)) for r, e in zip(refs, ests)]
    assert report.per_image_psnr == expected
    assert report.cpsnr == pytest.approx(sum(expected) / 3)
    assert report.std_error == pytest.approx(np.std(expected, ddof=1) / math.sqrt(3))
    assert report.n_images == 3


def test_cpsnr_single_image_has_zero_std_error(random_image):
    report = cpsnr_report([random_image()], [random_image()])
    assert report.std_error == 0.0


def test_report_is_permutation_invariant(rng):
    values = list(rng.uniform(20, 40, size=17))
    a = ScoreReport.from_values(values)
    b = ScoreReport.from_values(values[::-1])
    assert a.cpsnr == b.cpsnr
    assert a.std_error == b.std_error
    assert a.n_images == b.n_images
    assert sorted(a.per_image_psnr) == sorted(b.per_image_psnr)


def test_identical_images_are_degenerate(random_image):
    img = random_image()
    with pytest.raises(DegenerateImageError):
        cpsnr_report([img], [img])


def test_empty_set():
    with pytest.raises(EmptyDatasetError):
        cpsnr_report([], [])


def test_report_json():
    report = ScoreReport.from_values([30.0, 32.0])
    assert report.to_json() == (
        '{"cpsnr":31.0,"std_error":1.0,"n_images":2,"per_image_psnr":[30.0,32.0]}'
    )


def test_cmse_is_symmetric(rng):
    for _ in range(10):
        a, b = Image(rng.random((6, 5, 3))), Image(rng.random((6, 5, 3)))
        assert cmse(a, b) == cmse(b, a)


def test_psnr_is_strictly_decreasing_in_mse():
    mses = np.geomspace(1e-8, 10.0, 200)
    values = [psnr(m) for m in mses]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert psnr(0.04, 255) > psnr(0.05, 255)
