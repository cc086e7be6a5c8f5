from enum import Enum

import numpy as np

from src.exceptions import ConfigError
from src.imaging.image import Image

R, G, B = 0, 1, 2


class BayerPattern(str, Enum):
    """Bayer CFA variants, named by the 2x2 tile anchored at pixel (0, 0).

    Row-major reading of the tile: RGGB means (0,0)=R, (0,1)=G, (1,0)=G, (1,1)=B.
    """

    RGGB = "RGGB"
    BGGR = "BGGR"
    GRBG = "GRBG"
    GBRG = "GBRG"

    @classmethod
    def parse(cls, value: "str | BayerPattern") -> "BayerPattern":
        if isinstance(value, BayerPattern):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            choices = ", ".join(p.value for p in cls)
            raise ConfigError(f"unknown Bayer pattern {value!r} (choose from {choices})") from None

    @property
    def tile(self) -> np.ndarray:
        """2x2 array of channel indices."""
        lookup = {"R": R, "G": G, "B": B}
        return np.array([lookup[c] for c in self.value], dtype=np.int64).reshape(2, 2)

    def channel_at(self, row: int, col: int) -> int:
        return int(self.tile[row % 2, col % 2])

    def channel_map(self, height: int, width: int) -> np.ndarray:
        """Per-pixel sampled channel index."""
        reps = ((height + 1) // 2, (width + 1) // 2)
        return np.tile(self.tile, reps)[:height, :width]

    def masks(self, height: int, width: int) -> np.ndarray:
        """Boolean H x W x 3 array, True where a channel is sampled."""
        cmap = self.channel_map(height, width)
        return cmap[..., None] == np.arange(3)[None, None, :]

    def red_rows(self) -> int:
        """Row parity (0 or 1) of the rows that carry red samples."""
        return int(np.argwhere(self.tile == R)[0][0])


DEFAULT_PATTERN = BayerPattern.RGGB


def mosaic(img: Image, pattern: BayerPattern = DEFAULT_PATTERN) -> Image:
    """Sample one channel per pixel through the CFA, zero-filling the other two."""
    pattern = BayerPattern.parse(pattern)
    masks = pattern.masks(img.height, img.width)
    return Image(np.where(masks, img.data, 0.0))
