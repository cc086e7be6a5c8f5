"""Bilinear demosaicing.

Stencils per site class (same-colour samples only, weights normalised by the
number of samples that fall inside the replicate-padded image):

    G at R/B sites      cross    N, S, E, W            (4 neighbours)
    R at G, red row     horiz    W, E                  (2 neighbours)
    R at G, blue row    vert     N, S                  (2 neighbours)
    R at B sites        diag     NW, NE, SW, SE        (4 neighbours)
    B                   mirror image of R

Sampled values pass through untouched.
"""
import numpy as np
from scipy.ndimage import convolve

from src.exceptions import DimensionMismatchError
from src.imaging.bayer import B, G, R, BayerPattern
from src.imaging.image import Image

CROSS = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.float64)
HORIZ = np.array([[0, 0, 0], [1, 0, 1], [0, 0, 0]], dtype=np.float64)
VERT = np.array([[0, 1, 0], [0, 0, 0], [0, 1, 0]], dtype=np.float64)
DIAG = np.array([[1, 0, 1], [0, 0, 0], [1, 0, 1]], dtype=np.float64)


def _interp(samples: np.ndarray, mask: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    num = convolve(samples, kernel, mode="nearest")
    den = convolve(mask, kernel, mode="nearest")
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den > 0)
    return out


def demosaic_bilinear(mosaic: Image, pattern: BayerPattern = BayerPattern.RGGB) -> Image:
    pattern = BayerPattern.parse(pattern)
    h, w = mosaic.shape
    if h < 2 or w < 2:
        raise DimensionMismatchError(f"bilinear demosaicing needs at least 2x2, got {h}x{w}")

    masks = pattern.masks(h, w)
    fmask = masks.astype(np.float64)
    samples = np.where(masks, mosaic.data, 0.0)
    rows = np.arange(h)[:, None]
    red_row = np.broadcast_to(rows % 2 == pattern.red_rows(), (h, w))
    blue_row = ~red_row

    out = np.empty((h, w, 3), dtype=np.float64)

    g_est = _interp(samples[..., G], fmask[..., G], CROSS)
    out[..., G] = np.where(masks[..., G], samples[..., G], g_est)

    for ch, other, own_row in ((R, B, red_row), (B, R, blue_row)):
        horiz = _interp(samples[..., ch], fmask[..., ch], HORIZ)
        vert = _interp(samples[..., ch], fmask[..., ch], VERT)
        diag = _interp(samples[..., ch], fmask[..., ch], DIAG)
        at_g = masks[..., G]
        est = np.where(at_g & own_row, horiz, vert)
        est = np.where(masks[..., other], diag, est)
        out[..., ch] = np.where(masks[..., ch], samples[..., ch], est)

    return Image(out)
