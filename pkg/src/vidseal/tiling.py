"""Group a frame sequence into n*n blocks and tile each block into a mosaic.

Each block of n*n consecutive frames becomes one mosaic image under one of
two cell layouts:

* ``SEQUENTIAL``: frame j goes to grid cell (j // n, j % n).
* ``CORNER_TO_CENTER``: cells are reassigned so frames sitting near the
  grid corners move toward the centre (and central frames move outward).
  The hash is blind to the mosaic corners, so this second layout restores
  sensitivity there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .imaging import resize_bilinear, to_float, to_uint8
from .validation import check_grid_side, check_tile, check_video


class GridOrdering(Enum):
    SEQUENTIAL = "sequential"
    CORNER_TO_CENTER = "corner_to_center"


@dataclass
class FrameBlock:
    """Exactly n*n consecutive frames, zero-padded at the video tail."""

    index: int
    frames: list[np.ndarray]
    pad_count: int = 0


@dataclass
class Mosaic:
    """One tiled block: an (n*tile_h, n*tile_w, 3) uint8 image."""

    block_index: int
    ordering: GridOrdering
    image: np.ndarray


def partition(video, n: int) -> list[FrameBlock]:
    """Split a video into ceil(len/n^2) blocks of n^2 frames each.

    The final block is padded with all-black frames; both reference and
    query sides pad identically, so padding never adds distance.
    """
    n = check_grid_side(n)
    video = check_video(video)
    per_block = n * n
    block_count = math.ceil(len(video) / per_block)
    black = np.zeros_like(video[0])
    blocks = []
    for b in range(block_count):
        chunk = video[b * per_block : (b + 1) * per_block]
        pad = per_block - len(chunk)
        blocks.append(FrameBlock(b, chunk + [black] * pad, pad))
    return blocks


@lru_cache(maxsize=None)
def corner_to_center_permutation(n: int) -> tuple[int, ...]:
    """Cell reassignment for the corner-to-center layout.

    Cells are ranked by distance from the grid centre; the k-th farthest
    cell's occupant moves to the k-th nearest cell (ties broken row-major).
    Entry p of the result is the destination cell of the frame that the
    sequential layout puts at cell p.  Always a bijection.
    """
    n = check_grid_side(n)
    cells = range(n * n)

    def dist2_scaled(cell: int) -> int:
        # 4 * squared distance from cell centre (a, b), 1-based, to the
        # grid centre ((n+1)/2, (n+1)/2); integer, so ties are exact.
        a, b = divmod(cell, n)
        return (2 * (a + 1) - (n + 1)) ** 2 + (2 * (b + 1) - (n + 1)) ** 2

    farthest_first = sorted(cells, key=lambda c: (-dist2_scaled(c), c))
    nearest_first = sorted(cells, key=lambda c: (dist2_scaled(c), c))
    perm = [0] * (n * n)
    for src, dst in zip(farthest_first, nearest_first):
        perm[src] = dst
    return tuple(perm)


def tile(
    block: FrameBlock, ordering: GridOrdering, tile_w: int, tile_h: int
) -> Mosaic:
    """Resize each frame to tile_w x tile_h and compose the n*n mosaic."""
    tile_w, tile_h = check_tile(tile_w, tile_h)
    n = math.isqrt(len(block.frames))
    if n * n != len(block.frames):
        raise ValueError(f"block holds {len(block.frames)} frames, not a square")
    perm = None
    if ordering is GridOrdering.CORNER_TO_CENTER:
        perm = corner_to_center_permutation(n)

    image = np.empty((n * tile_h, n * tile_w, 3), dtype=np.uint8)
    for j, frame in enumerate(block.frames):
        if frame.shape[:2] == (tile_h, tile_w):
            patch = frame
        else:
            patch = to_uint8(resize_bilinear(to_float(frame), tile_w, tile_h))
        cell = j if perm is None else perm[j]
        row, col = divmod(cell, n)
        image[
            row * tile_h : (row + 1) * tile_h, col * tile_w : (col + 1) * tile_w
        ] = patch
    return Mosaic(block.index, ordering, image)
