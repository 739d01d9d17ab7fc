"""Ground-truth dataset generation: temporal tampering and benign distortion.

Four frame-level operations produce tampered videos with per-frame labels:

* insert  - splice donor frames in front of given positions
* delete  - remove the frames at given positions
* reorder - shuffle the frames at given positions among themselves
* replace - overwrite the frames at given positions with donor frames

Recompression and resizing emulate what sharing platforms do to uploads;
they degrade pixels but never change the labels.
"""

from __future__ import annotations

import io
import json
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DegenerateOutput, MissingDonor, OutOfBounds
from .imaging import resize_bilinear, to_float, to_uint8
from .validation import check_video

TAMPER_OPS = ("insert", "delete", "reorder", "replace")

# Sharing-platform emulation defaults: "twitter" recompresses, "instagram"
# recompresses and shrinks to 90%.
SNS_PRESETS = {
    "twitter": {"jpeg_quality": 75, "resize_scale": None},
    "instagram": {"jpeg_quality": 75, "resize_scale": 0.9},
}


@dataclass
class TamperSpec:
    """One tamper operation. ``donor`` frames are required for insert/replace."""

    op: str
    positions: list[int]
    donor: list[np.ndarray] | None = None
    seed: int = 0


@dataclass
class GroundTruth:
    """Per-frame operated flags for a (possibly tampered) video."""

    frame_flags: list[bool]

    def block_labels(self, n: int) -> list[bool]:
        """Block is positive iff any of its real (non-padding) frames is."""
        per_block = n * n
        flags = self.frame_flags
        return [
            any(flags[at : at + per_block]) for at in range(0, len(flags), per_block)
        ]


def _check_positions(positions, length: int, *, allow_end: bool) -> list[int]:
    out = sorted(int(p) for p in positions)
    limit = length if allow_end else length - 1
    for p in out:
        if p < 0 or p > limit:
            raise OutOfBounds(f"position {p} outside video of {length} frames")
    return out


def _unique_positions(positions, length: int) -> list[int]:
    out = _check_positions(positions, length, allow_end=False)
    return sorted(set(out))


def _apply_one(video, flags, spec: TamperSpec):
    """Transform (frames, flags) by one operation; flags travel with frames."""
    if spec.op not in TAMPER_OPS:
        raise ValueError(f"unknown tamper op {spec.op!r}")
    if spec.op in ("insert", "replace"):
        if not spec.donor:
            raise MissingDonor(f"{spec.op} needs donor frames")
        donor = check_video(spec.donor)
        if donor[0].shape != video[0].shape:
            raise ValueError("donor frames must match the video dimensions")

    if spec.op == "insert":
        positions = _check_positions(spec.positions, len(video), allow_end=True)
        out_frames, out_flags = [], []
        taken = 0
        for i in range(len(video) + 1):
            while taken < len(positions) and positions[taken] == i:
                out_frames.append(donor[taken % len(donor)])
                out_flags.append(True)
                taken += 1
            if i < len(video):
                out_frames.append(video[i])
                out_flags.append(flags[i])
        return out_frames, out_flags

    if spec.op == "delete":
        removed = set(_unique_positions(spec.positions, len(video)))
        out_frames, out_flags = [], []
        gap_open = False
        for i in range(len(video)):
            if i in removed:
                gap_open = True
                continue
            out_frames.append(video[i])
            # The deletion itself leaves no frame to flag, so mark the first
            # survivor after each removed run.
            out_flags.append(flags[i] or gap_open)
            gap_open = False
        return out_frames, out_flags

    if spec.op == "reorder":
        positions = _unique_positions(spec.positions, len(video))
        order = list(range(len(positions)))
        random.Random(spec.seed).shuffle(order)
        if len(order) >= 2 and order == sorted(order):
            # A shuffle may come out as the identity; rotate so the
            # operation always moves every selected frame.
            order = order[1:] + order[:1]
        out_frames = list(video)
        out_flags = list(flags)
        for slot, src in zip(positions, order):
            moved = positions[src] != slot
            out_frames[slot] = video[positions[src]]
            out_flags[slot] = flags[positions[src]] or moved
        return out_frames, out_flags

    # replace
    positions = _unique_positions(spec.positions, len(video))
    out_frames = list(video)
    out_flags = list(flags)
    for k, p in enumerate(positions):
        out_frames[p] = donor[k % len(donor)]
        out_flags[p] = True
    return out_frames, out_flags


def apply_tamper(video, spec: TamperSpec) -> tuple[list[np.ndarray], GroundTruth]:
    """Apply one operation to an untampered video."""
    video = check_video(video)
    frames, flags = _apply_one(video, [False] * len(video), spec)
    return frames, GroundTruth(flags)


def apply_tamper_sequence(video, specs) -> tuple[list[np.ndarray], GroundTruth]:
    """Apply several operations in order, accumulating labels.

    Positions in each spec refer to the video as it stands when that spec
    runs (earlier inserts/deletes shift later indices).
    """
    video = check_video(video)
    flags = [False] * len(video)
    for spec in specs:
        video, flags = _apply_one(video, flags, spec)
    return video, GroundTruth(flags)


def distort_jpeg(video, quality: int) -> list[np.ndarray]:
    """Round-trip every frame through baseline JPEG at the given quality."""
    quality = int(quality)
    if not 1 <= quality <= 100:
        raise ValueError(f"JPEG quality must be 1..100, got {quality}")
    out = []
    for frame in check_video(video):
        buf = io.BytesIO()
        Image.fromarray(frame, mode="RGB").save(buf, format="JPEG", quality=quality)
        buf.seek(0)
        out.append(np.asarray(Image.open(buf).convert("RGB"), dtype=np.uint8))
    return out


def distort_resize(video, scale: float) -> list[np.ndarray]:
    """Bilinearly shrink every frame to floor(w*scale) x floor(h*scale)."""
    scale = float(scale)
    if not 0.0 < scale <= 1.0:
        raise ValueError(f"scale must be in (0, 1], got {scale}")
    video = check_video(video)
    h, w = video[0].shape[:2]
    out_w, out_h = int(w * scale), int(h * scale)
    if out_w < 1 or out_h < 1:
        raise DegenerateOutput(f"scale {scale} collapses {w}x{h} to {out_w}x{out_h}")
    return [to_uint8(resize_bilinear(to_float(f), out_w, out_h)) for f in video]


def synth_video(
    kind: str, frames: int, w: int, h: int, seed: int = 0
) -> list[np.ndarray]:
    """Deterministic synthetic source videos.

    * ``solid``: every frame plain white.
    * ``gradient_motion``: smooth colour waves drifting over time, so any
      two frames differ and blocks are hash-distinguishable.
    * ``noise_texture``: fresh uniform noise per frame.
    """
    if frames < 1 or w < 1 or h < 1:
        raise ValueError("frame count and dimensions must be >= 1")
    if kind == "solid":
        return [np.full((h, w, 3), 255, dtype=np.uint8)] * frames

    rng = np.random.default_rng(seed)
    if kind == "noise_texture":
        return [
            rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
            for _ in range(frames)
        ]
    if kind != "gradient_motion":
        raise ValueError(f"unknown synthetic kind {kind!r}")

    # Two sinusoidal plaids per channel with per-channel drift speed.
    xs = np.linspace(0.0, 1.0, w, endpoint=False)[None, :]
    ys = np.linspace(0.0, 1.0, h, endpoint=False)[:, None]
    fx = rng.uniform(0.5, 2.5, size=(2, 3))
    fy = rng.uniform(0.5, 2.5, size=(2, 3))
    phase = rng.uniform(0.0, 2 * np.pi, size=(2, 3))
    speed = rng.uniform(0.05, 0.12, size=(2, 3)) * 2 * np.pi
    video = []
    for t in range(frames):
        img = np.zeros((h, w, 3), dtype=np.float64)
        for c in range(3):
            waves = sum(
                np.sin(
                    2 * np.pi * (fx[k, c] * xs + fy[k, c] * ys)
                    + phase[k, c]
                    + speed[k, c] * t
                )
                for k in range(2)
            )
            img[:, :, c] = 0.5 + waves / 4.0
        video.append(to_uint8(img))
    return video


# --- ground-truth manifests and simulation spec files ---


def write_truth(
    truth: GroundTruth, spec_doc: dict, n: int, path: str | Path
) -> None:
    """Write the truth.json manifest next to a simulated frame directory."""
    doc = {
        "frame_flags": list(truth.frame_flags),
        "block_labels": truth.block_labels(n),
        "spec": spec_doc,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def read_truth(path: str | Path) -> dict:
    doc = json.loads(Path(path).read_text())
    for key in ("frame_flags", "block_labels", "spec"):
        if key not in doc:
            raise ValueError(f"{path}: missing {key!r}")
    return doc
