from pathlib import Path

import numpy as np
import pytest

from src.imaging.image import Image
from src.imaging.patches import sample_patches
from src.imaging.synth import Affine, ZonePlate, synth_image


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def random_image(rng):
    def _make(h: int = 8, w: int = 8) -> Image:
        return Image(rng.random((h, w, 3)))

    return _make


@pytest.fixture
def affine_image() -> Image:
    return synth_image(Affine((0.01, 0.02, 0.015), (0.02, 0.005, 0.01), (0.1, 0.2, 0.3)), 16, 16)


@pytest.fixture
def small_patch_sets():
    sources = [synth_image(ZonePlate(0.05), 48, 48), synth_image(ZonePlate(0.11), 48, 48)]
    train = sample_patches(sources, 8, size=8, seed=0, names=["a", "b"])
    valid = sample_patches(sources, 4, size=8, seed=1, names=["a", "b"])
    return train, valid


@pytest.fixture
def ledger_path(tmp_path: Path) -> Path:
    return tmp_path / "trials.jsonl"
