"""Reconstruction quality scores: per-channel MSE, colour MSE, PSNR and the
dataset-level CPSNR (mean of per-image PSNRs) with its standard error."""
import json
import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Sequence

import numpy as np

from src.exceptions import DegenerateImageError, EmptyDatasetError, DimensionMismatchError
from src.imaging.image import Image, require_same_shape


class ChannelId(IntEnum):
    R = 0
    G = 1
    B = 2


def _sum_squares(diff: np.ndarray) -> float:
    # fsum keeps the result correctly rounded regardless of image size
    return math.fsum((diff * diff).ravel().tolist())


def mse_channel(ref: Image, est: Image, k: ChannelId) -> float:
    require_same_shape(ref, est)
    k = ChannelId(k)
    diff = est.data[..., k] - ref.data[..., k]
    return _sum_squares(diff) / (ref.height * ref.width)


def cmse(ref: Image, est: Image) -> float:
    """Colour MSE: the mean of the three per-channel MSEs."""
    require_same_shape(ref, est)
    return math.fsum(mse_channel(ref, est, k) for k in ChannelId) / 3.0


def psnr(mse: float, peak: float = 1.0) -> float:
    """10*log10(peak^2 / mse); an exact reconstruction gives +inf."""
    if mse < 0 or math.isnan(mse):
        raise ValueError(f"mse must be non-negative, got {mse}")
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def psnr_channel(ref: Image, est: Image, k: ChannelId, peak: float = 1.0) -> float:
    return psnr(mse_channel(ref, est, k), peak)


@dataclass(frozen=True)
class ScoreReport:
    per_image_psnr: list[float] = field(default_factory=list)
    cpsnr: float = 0.0
    std_error: float = 0.0
    n_images: int = 0

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "ScoreReport":
        values = [float(v) for v in values]
        if not values:
            raise EmptyDatasetError("cannot score an empty image set")
        bad = [i for i, v in enumerate(values) if not math.isfinite(v)]
        if bad:
            raise DegenerateImageError(
                f"infinite PSNR for image index {bad[0]}: estimate is identical to the reference"
            )
        n = len(values)
        # order-independent so permuted inputs give an identical report
        mean = math.fsum(values) / n
        if n >= 2:
            var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
            std_error = math.sqrt(var) / math.sqrt(n)
        else:
            std_error = 0.0
        return cls(per_image_psnr=values, cpsnr=mean, std_error=std_error, n_images=n)

    def to_dict(self) -> dict:
        return {
            "cpsnr": self.cpsnr,
            "std_error": self.std_error,
            "n_images": self.n_images,
            "per_image_psnr": list(self.per_image_psnr),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def cpsnr_report(refs: Sequence[Image], ests: Sequence[Image], peak: float = 1.0) -> ScoreReport:
    """PSNR per image from its CMSE, then the mean over the set."""
    if len(refs) != len(ests):
        raise DimensionMismatchError(f"{len(refs)} references but {len(ests)} estimates")
    if not refs:
        raise EmptyDatasetError("cannot score an empty image set")
    return ScoreReport.from_values([psnr(cmse(r, e), peak) for r, e in zip(refs, ests)])
