from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from src.config import settings
from src.exceptions import ConfigError, SourceTooSmallError
from src.imaging.image import Image
from src.utils.rng import make_rng


@dataclass(frozen=True)
class PatchSource:
    """Provenance of one patch: source name and top-left corner."""

    file: str
    row: int
    col: int

    def to_line(self) -> str:
        return f"{self.file},{self.row},{self.col}"

    @classmethod
    def from_line(cls, line: str) -> "PatchSource":
        file, row, col = line.rsplit(",", 2)
        return cls(file, int(row), int(col))


@dataclass(frozen=True, eq=False)
class PatchSet:
    patches: list[Image]
    source_ids: list[PatchSource]
    seed: int
    size: int = field(default=32)

    def __len__(self):
        return len(self.patches)

    def equals(self, other: "PatchSet") -> bool:
        return (
            self.seed == other.seed
            and self.source_ids == other.source_ids
            and len(self.patches) == len(other.patches)
            and all(a.equals(b) for a, b in zip(self.patches, other.patches))
        )

    def stack(self) -> np.ndarray:
        """Patches as an N x 3 x size x size array."""
        return np.stack([p.data.transpose(2, 0, 1) for p in self.patches])


def sample_patches(
    sources: Sequence[Image],
    count: int,
    size: int | None = None,
    seed: int | None = None,
    names: Sequence[str] | None = None,
) -> PatchSet:
    """Draw `count` patches: pick a source uniformly, then a top-left corner
    uniformly over every position that keeps the patch inside the source."""
    size = settings.PATCH_SIZE if size is None else size
    seed = settings.SEED if seed is None else seed
    if count < 1:
        raise ConfigError(f"patch count must be >= 1, got {count}")
    if not sources:
        raise ConfigError("no source images to sample patches from")
    names = list(names) if names is not None else [f"source{i}" for i in range(len(sources))]
    if len(names) != len(sources):
        raise ConfigError("names and sources differ in length")
    for name, src in zip(names, sources):
        if src.height < size or src.width < size:
            raise SourceTooSmallError(name, src.height, src.width, size)

    rng = make_rng(seed)
    patches, ids = [], []
    for _ in range(count):
        k = int(rng.integers(len(sources)))
        src = sources[k]
        row = int(rng.integers(src.height - size + 1))
        col = int(rng.integers(src.width - size + 1))
        patches.append(src.crop(row, col, size, size))
        ids.append(PatchSource(names[k], row, col))
    return PatchSet(patches=patches, source_ids=ids, seed=seed, size=size)
