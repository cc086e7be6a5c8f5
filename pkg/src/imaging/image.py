from dataclasses import dataclass, field

import numpy as np

from src.exceptions import DimensionMismatchError


@dataclass(frozen=True, eq=False)
class Image:
    """H x W x 3 raster of float64 intensities in [0, 1].

    The array is copied on construction and marked read-only, so an Image can
    be shared freely between threads. `ppm_header` holds the header bytes of
    the file the image was loaded from; derived images start without one.
    """

    data: np.ndarray
    ppm_header: bytes | None = field(default=None, repr=False)

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, copy=True)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise DimensionMismatchError(f"expected an H x W x 3 array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatchError(f"image must be at least 1x1, got {arr.shape[:2]}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_array(cls, arr, clip: bool = False) -> "Image":
        arr = np.asarray(arr, dtype=np.float64)
        if clip:
            arr = np.clip(arr, 0.0, 1.0)
        return cls(arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    def to_array(self) -> np.ndarray:
        """Writable copy of the pixel data."""
        return self.data.copy()

    def crop(self, row: int, col: int, height: int, width: int) -> "Image":
        if row < 0 or col < 0 or row + height > self.height or col + width > self.width:
            raise DimensionMismatchError(
                f"crop ({row},{col},{height}x{width}) outside {self.height}x{self.width} image"
            )
        return Image(self.data[row : row + height, col : col + width])

    def equals(self, other: "Image") -> bool:
        """Bit-exact equality."""
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"<Image({self.height}x{self.width})>"


def require_same_shape(a: Image, b: Image):
    if a.shape != b.shape:
        raise DimensionMismatchError(f"image dimensions differ: {a.shape} vs {b.shape}")
