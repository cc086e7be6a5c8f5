"""Whole-image reconstruction with a trained network.

The image is partitioned into tile x tile cores; each core is forwarded with
`overlap` pixels of context on every side (mirror padding at the image
border keeps the CFA phase) and only the core is kept.
"""
from dataclasses import dataclass

import numpy as np

from src.config import settings
from src.imaging.image import Image
from src.neuralnet.network import Network


@dataclass(frozen=True)
class Tile:
    row: int
    col: int
    height: int
    width: int


def plan_tiles(height: int, width: int, tile: int) -> list[Tile]:
    if height <= tile and width <= tile:
        return [Tile(0, 0, height, width)]
    return [
        Tile(r, c, min(tile, height - r), min(tile, width - c))
        for r in range(0, height, tile)
        for c in range(0, width, tile)
    ]


def demosaic_net(net: Network, mosaic: Image, tile: int | None = None, overlap: int | None = None) -> Image:
    tile = settings.PATCH_SIZE if tile is None else tile
    overlap = settings.TILE_OVERLAP if overlap is None else overlap
    chw = mosaic.data.transpose(2, 0, 1)
    tiles = plan_tiles(mosaic.height, mosaic.width, tile)

    if len(tiles) == 1:
        out = net.forward(chw[None], "eval")[0]
        return Image(np.clip(out.transpose(1, 2, 0), 0.0, 1.0))

    mode = "reflect" if min(mosaic.height, mosaic.width) > overlap else "edge"
    padded = np.pad(chw, ((0, 0), (overlap, overlap), (overlap, overlap)), mode=mode)
    out = np.empty_like(chw)
    for t in tiles:
        window = padded[:, t.row : t.row + t.height + 2 * overlap, t.col : t.col + t.width + 2 * overlap]
        pred = net.forward(window[None], "eval")[0]
        out[:, t.row : t.row + t.height, t.col : t.col + t.width] = pred[
            :, overlap : overlap + t.height, overlap : overlap + t.width
        ]
    return Image(np.clip(out.transpose(1, 2, 0), 0.0, 1.0))
