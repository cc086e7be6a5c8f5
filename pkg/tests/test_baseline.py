import numpy as np
import pytest

from src.baseline.bilinear import demosaic_bilinear
from src.exceptions import DimensionMismatchError
from src.imaging.bayer import B, G, R, BayerPattern, mosaic
from src.imaging.image import Image
from src.imaging.synth import Affine, Constant, ZonePlate, synth_image
from src.metrics.scores import cpsnr_report


@pytest.mark.parametrize("pattern", list(BayerPattern))
def test_constant_image_is_exact_everywhere(pattern):
    img = synth_image(Constant(0.4), 9, 7)
    out = demosaic_bilinear(mosaic(img, pattern), pattern)
    np.testing.assert_allclose(out.data, img.data, rtol=0, atol=1e-15)


@pytest.mark.parametrize("pattern", list(BayerPattern))
def test_affine_image_is_exact_in_the_interior(pattern, affine_image):
    out = demosaic_bilinear(mosaic(affine_image, pattern), pattern)
    np.testing.assert_allclose(out.data[1:-1, 1:-1], affine_image.data[1:-1, 1:-1], rtol=0, atol=1e-12)


def test_random_affine_images_are_exact_in_the_interior(rng):
    for _ in range(5):
        a, b = rng.uniform(-0.02, 0.02, (2, 3))
        c = rng.uniform(0.4, 0.6, 3)
        img = synth_image(Affine(a, b, c), 10, 12)
        out = demosaic_bilinear(mosaic(img))
        np.testing.assert_allclose(out.data[1:-1, 1:-1], img.data[1:-1, 1:-1], rtol=0, atol=1e-12)


def test_samples_pass_through(random_image):
    img = random_image(8, 8)
    cfa = mosaic(img)
    out = demosaic_bilinear(cfa)
    masks = BayerPattern.RGGB.masks(8, 8)
    np.testing.assert_array_equal(out.data[masks], cfa.data[masks])


def test_red_impulse_reads_out_stencil_weights():
    data = np.zeros((8, 8, 3))
    data[4, 4, R] = 1.0
    out = demosaic_bilinear(Image(data), BayerPattern.RGGB)
    red = out.data[..., R]
    assert red[4, 4] == 1.0
    # collinear green sites
    for i, j in ((3, 4), (5, 4), (4, 3), (4, 5)):
        assert red[i, j] == 0.5
    # diagonal blue sites
    for i, j in ((3, 3), (3, 5), (5, 3), (5, 5)):
        assert red[i, j] == 0.25
    assert red[2, 2] == 0.0 and red[6, 6] == 0.0
    assert np.all(out.data[..., G] == 0.0)
    assert np.all(out.data[..., B] == 0.0)


def test_green_impulse_spreads_over_the_cross():
    data = np.zeros((6, 6, 3))
    data[2, 3, G] = 1.0
    out = demosaic_bilinear(Image(data), BayerPattern.RGGB)
    green = out.data[..., G]
    for i, j in ((1, 3), (3, 3), (2, 2), (2, 4)):
        assert green[i, j] == 0.25


def test_too_small_mosaic():
    with pytest.raises(DimensionMismatchError):
        demosaic_bilinear(Image(np.zeros((1, 4, 3))))


def test_minimal_2x2():
    img = synth_image(Constant(0.7), 2, 2)
    out = demosaic_bilinear(mosaic(img))
    np.testing.assert_allclose(out.data, img.data, atol=1e-15)


@pytest.mark.parametrize("pattern", list(BayerPattern))
def test_output_stays_within_sample_range(pattern, random_image):
    cfa = mosaic(random_image(12, 10), pattern)
    out = demosaic_bilinear(cfa, pattern)
    masks = pattern.masks(12, 10)
    for c in range(3):
        samples = cfa.data[..., c][masks[..., c]]
        assert out.data[..., c].min() >= samples.min() - 1e-12
        assert out.data[..., c].max() <= samples.max() + 1e-12


def test_zone_plate_scores_below_affine(affine_image):
    def score(img):
        return cpsnr_report([img], [demosaic_bilinear(mosaic(img))]).cpsnr

    zone = synth_image(ZonePlate(0.1), 16, 16)
    zone_score, affine_score = score(zone), score(affine_image)
    assert np.isfinite(zone_score)
    assert zone_score < affine_score
