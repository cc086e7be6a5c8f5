"""Synthetic test patterns.

Zone plates and checkerboards are there to provoke zipper and false-colour
artifacts in interpolating reconstructors; constant and affine images are the
cases a bilinear reconstructor must get exactly right.
"""
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from src.exceptions import ConfigError
from src.imaging.image import Image


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Affine:
    """Channel c at (i, j) is a[c]*i + b[c]*j + c[c]."""

    a: Sequence[float]
    b: Sequence[float]
    c: Sequence[float]


@dataclass(frozen=True)
class ZonePlate:
    freq: float


@dataclass(frozen=True)
class Checkerboard:
    period: int = 1
    low: float = 0.0
    high: float = 1.0


SynthKind = Union[Constant, Affine, ZonePlate, Checkerboard]


def synth_image(kind: SynthKind, h: int, w: int) -> Image:
    if h < 1 or w < 1:
        raise ConfigError(f"synthetic image size must be positive, got {h}x{w}")
    ii, jj = np.meshgrid(np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij")

    if isinstance(kind, Constant):
        data = np.full((h, w, 3), float(kind.value))
    elif isinstance(kind, Affine):
        a, b, c = (np.asarray(v, dtype=np.float64).reshape(3) for v in (kind.a, kind.b, kind.c))
        data = ii[..., None] * a + jj[..., None] * b + c
    elif isinstance(kind, ZonePlate):
        plane = 0.5 + 0.5 * np.cos(kind.freq * (ii**2 + jj**2))
        data = np.repeat(plane[..., None], 3, axis=2)
    elif isinstance(kind, Checkerboard):
        if kind.period < 1:
            raise ConfigError(f"checkerboard period must be >= 1, got {kind.period}")
        cells = (ii // kind.period + jj // kind.period) % 2
        plane = np.where(cells == 0, kind.low, kind.high)
        data = np.repeat(plane[..., None], 3, axis=2)
    else:
        raise ConfigError(f"unknown synthetic pattern {kind!r}")

    return Image(np.clip(data, 0.0, 1.0))


def parse_kind(text: str) -> SynthKind:
    """Parse CLI forms such as ``constant:0.5``, ``zoneplate:0.1``,
    ``checker:4`` or ``affine:a0,a1,a2:b0,b1,b2:c0,c1,c2``."""
    name, _, rest = text.partition(":")
    name = name.strip().lower()
    try:
        if name == "constant":
            return Constant(float(rest))
        if name == "zoneplate":
            return ZonePlate(float(rest))
        if name in ("checker", "checkerboard"):
            return Checkerboard(int(rest) if rest else 1)
        if name == "affine":
            parts = rest.split(":")
            if len(parts) != 3:
                raise ValueError("affine needs three comma-separated triples")
            a, b, c = ([float(x) for x in p.split(",")] for p in parts)
            if not len(a) == len(b) == len(c) == 3:
                raise ValueError("affine triples need three values each")
            return Affine(a, b, c)
    except ValueError as exc:
        raise ConfigError(f"bad synthetic pattern {text!r}: {exc}") from None
    raise ConfigError(f"unknown synthetic pattern {text!r}")
