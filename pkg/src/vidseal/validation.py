"""Input validation helpers shared by the pipeline stages.

Frames are plain numpy arrays: uint8, shape (height, width, 3), RGB.
Float images are float64 in [0, 1] with the same layout.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptyVideo, HeterogeneousDimensions, InvalidGrid

MODES = ("single", "dual")


def check_frame(frame) -> np.ndarray:
    """Validate one RGB frame and return it as a uint8 array."""
    arr = np.asarray(frame)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"frame must have shape (h, w, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("frame must be at least 1x1")
    if arr.dtype != np.uint8:
        raise ValueError(f"frame samples must be uint8, got {arr.dtype}")
    return arr


def check_video(frames) -> list[np.ndarray]:
    """Validate a frame sequence: non-empty, all uint8 RGB, equal sizes."""
    video = [check_frame(f) for f in frames]
    if not video:
        raise EmptyVideo("video has no frames")
    shape = video[0].shape
    for i, f in enumerate(video):
        if f.shape != shape:
            raise HeterogeneousDimensions(
                f"frame {i} is {f.shape[1]}x{f.shape[0]}, expected "
                f"{shape[1]}x{shape[0]}"
            )
    return video


def check_float_image(img) -> np.ndarray:
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"image must have shape (h, w, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    return arr


def check_grid_side(n: int) -> int:
    n = int(n)
    if n < 2:
        raise InvalidGrid(f"grid side must be >= 2, got {n}")
    return n


def check_threshold(d: int) -> int:
    d = int(d)
    if not 0 <= d <= 120:
        raise ValueError(f"threshold must be in 0..120, got {d}")
    return d


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def check_tile(tile_w: int, tile_h: int) -> tuple[int, int]:
    tile_w, tile_h = int(tile_w), int(tile_h)
    if tile_w < 8 or tile_h < 8:
        raise ValueError(f"tile size must be at least 8x8, got {tile_w}x{tile_h}")
    return tile_w, tile_h
