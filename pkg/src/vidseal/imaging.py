"""Frame I/O and the two image primitives the hash pipeline needs.

Supported codecs are PNG and binary PPM (P6) only; videos are ingested as
numbered frame directories (``frame_000001.png`` ...) produced by any
external decoder.
"""

from __future__ import annotations

import io
import os
import re
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    CorruptImage,
    EmptyVideo,
    FrameSequenceError,
    InvalidDimensions,
    UnsupportedFormat,
)
from .validation import check_float_image, check_frame

_SUPPORTED_FORMATS = {"PNG", "PPM"}
_FRAME_RE = re.compile(r"^frame_(\d{6})\.(png|ppm)$")

# 1-D Gaussian, sigma 1, sampled at offsets -2..2 and normalised to sum 1.
_BLUR_KERNEL = np.exp(-0.5 * np.arange(-2.0, 3.0) ** 2)
_BLUR_KERNEL /= _BLUR_KERNEL.sum()


def to_float(frame: np.ndarray) -> np.ndarray:
    """Convert a uint8 frame to a float image with samples in [0, 1]."""
    return check_frame(frame).astype(np.float64) / 255.0


def to_uint8(img: np.ndarray) -> np.ndarray:
    """Quantise a float image back to 8-bit samples (round half to even)."""
    return np.rint(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)


def load_frame(path: str | os.PathLike) -> np.ndarray:
    """Decode one PNG or binary PPM file into a uint8 RGB frame.

    Grayscale and palette inputs are expanded to 3 channels; alpha is
    dropped.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        payload = fh.read()
    try:
        im = Image.open(io.BytesIO(payload))
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat(f"{path}: not a PNG or PPM file") from exc
    if im.format not in _SUPPORTED_FORMATS:
        raise UnsupportedFormat(f"{path}: {im.format} is not supported")
    if im.format == "PPM" and not payload.startswith(b"P6"):
        raise UnsupportedFormat(f"{path}: only binary (P6) PPM is supported")
    try:
        rgb = im.convert("RGB")
        arr = np.asarray(rgb, dtype=np.uint8)
    except (OSError, ValueError, SyntaxError) as exc:
        raise CorruptImage(f"{path}: {exc}") from exc
    return check_frame(arr)


def save_frame(frame: np.ndarray, path: str | os.PathLike) -> None:
    """Write a frame as PNG or binary PPM, selected by file extension."""
    frame = check_frame(frame)
    path = Path(path)
    ext = path.suffix.lower()
    if ext == ".png":
        fmt = "PNG"
    elif ext == ".ppm":
        fmt = "PPM"
    else:
        raise UnsupportedFormat(f"{path}: use a .png or .ppm extension")
    if not path.parent.is_dir():
        raise OSError(f"{path.parent}: directory does not exist")
    Image.fromarray(frame, mode="RGB").save(path, format=fmt)


def frame_name(index: int, ext: str = "png") -> str:
    """Name of the ``index``-th (1-based) frame file in a sequence."""
    return f"frame_{index:06d}.{ext}"


def load_frame_dir(path: str | os.PathLike) -> list[np.ndarray]:
    """Ingest a directory of frame_%06d.png/.ppm files, indices 1..N.

    Raises FrameSequenceError on gaps, duplicates, or indices not starting
    at 1, and EmptyVideo when no frame files are present.
    """
    path = Path(path)
    if not path.is_dir():
        raise FileNotFoundError(f"{path}: not a directory")
    found: dict[int, Path] = {}
    for entry in sorted(path.iterdir()):
        m = _FRAME_RE.match(entry.name)
        if not m:
            continue
        idx = int(m.group(1))
        if idx in found:
            raise FrameSequenceError(f"{path}: duplicate frame index {idx}")
        found[idx] = entry
    if not found:
        raise EmptyVideo(f"{path}: no frame_%06d.png/.ppm files")
    indices = sorted(found)
    if indices[0] != 1 or indices[-1] != len(indices):
        raise FrameSequenceError(
            f"{path}: frame indices must run 1..{len(indices)} contiguously"
        )
    return [load_frame(found[i]) for i in indices]


def save_frame_dir(frames, path: str | os.PathLike, ext: str = "png") -> None:
    """Write frames as a contiguous frame_%06d sequence (1-based)."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(frames, start=1):
        save_frame(frame, path / frame_name(i, ext))


def _convolve_axis(img: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    # Clamp-to-edge: replicate the border sample across the pad band.
    radius = len(kernel) // 2
    pad = [(0, 0)] * img.ndim
    pad[axis] = (radius, radius)
    padded = np.pad(img, pad, mode="edge")
    out = np.zeros_like(img)
    index = [slice(None)] * img.ndim
    for tap, weight in enumerate(kernel):
        index[axis] = slice(tap, tap + img.shape[axis])
        out += weight * padded[tuple(index)]
    return out


def gaussian_blur_5x5(img: np.ndarray) -> np.ndarray:
    """Separable 5x5 Gaussian (sigma 1) with clamp-to-edge borders."""
    img = check_float_image(img)
    return _convolve_axis(_convolve_axis(img, _BLUR_KERNEL, 1), _BLUR_KERNEL, 0)


def resize_bilinear(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Bilinear resize with half-pixel-centred sampling.

    Source coordinate of output pixel i is (i + 0.5) * in/out - 0.5,
    clamped to the image, so resizing to the same size is exact.
    """
    if out_w < 1 or out_h < 1:
        raise InvalidDimensions(f"output size {out_w}x{out_h} must be >= 1x1")
    img = check_float_image(img)
    in_h, in_w = img.shape[:2]

    def axis_coords(out_n: int, in_n: int):
        src = (np.arange(out_n) + 0.5) * (in_n / out_n) - 0.5
        src = np.clip(src, 0.0, in_n - 1.0)
        lo = np.floor(src).astype(np.intp)
        hi = np.minimum(lo + 1, in_n - 1)
        return lo, hi, src - lo

    y0, y1, fy = axis_coords(out_h, in_h)
    x0, x1, fx = axis_coords(out_w, in_w)

    top = img[y0][:, x0] * (1 - fx)[None, :, None] + img[y0][:, x1] * fx[None, :, None]
    bot = img[y1][:, x0] * (1 - fx)[None, :, None] + img[y1][:, x1] * fx[None, :, None]
    return top * (1 - fy)[:, None, None] + bot * fy[:, None, None]
