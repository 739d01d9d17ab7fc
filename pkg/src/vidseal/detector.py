"""Compare per-block mosaic hashes of a reference and a query video.

A block is judged operated when its Hamming distance reaches the threshold
d (greater-or-equal, never strict).  In dual mode the distance is the max
over the two mosaic layouts, which closes the corner blind spot of the
hash; single mode uses the sequential layout alone.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from .errors import ConfigMismatch
from .hashing import HASH_BITS, compute_hash, hamming_distance
from .imaging import load_frame_dir
from .store import HashRecord
from .tiling import GridOrdering, partition, tile
from .validation import (
    check_grid_side,
    check_mode,
    check_threshold,
    check_tile,
    check_video,
)

# Distance reported for a block that exists on only one side; ensures the
# block is judged operated at any legal threshold.
SURPLUS_DISTANCE = HASH_BITS


@dataclass
class BlockVerdict:
    block_index: int
    dist_primary: int
    dist_corner: int
    dist_combined: int
    operated: bool


@dataclass
class DetectionReport:
    n: int
    d: int
    mode: str
    verdicts: list[BlockVerdict] = field(default_factory=list)
    video_operated: bool = False
    length_mismatch: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["block_index", "dist_primary", "dist_corner", "dist_combined", "operated"]
        )
        for v in self.verdicts:
            writer.writerow(
                [
                    v.block_index,
                    v.dist_primary,
                    v.dist_corner,
                    v.dist_combined,
                    "true" if v.operated else "false",
                ]
            )
        return buf.getvalue()


def _hash_block(block, tile_w: int, tile_h: int) -> tuple[bytes, bytes]:
    primary = compute_hash(tile(block, GridOrdering.SEQUENTIAL, tile_w, tile_h).image)
    corner = compute_hash(
        tile(block, GridOrdering.CORNER_TO_CENTER, tile_w, tile_h).image
    )
    return primary, corner


def hash_video(
    video,
    n: int = 8,
    tile_w: int = 96,
    tile_h: int = 54,
    threads: int | None = None,
) -> HashRecord:
    """Hash every block of a video under both layouts.

    ``threads`` only controls how many blocks are hashed concurrently;
    the record content is identical for any thread count.
    """
    n = check_grid_side(n)
    tile_w, tile_h = check_tile(tile_w, tile_h)
    video = check_video(video)
    blocks = partition(video, n)
    record = HashRecord(
        n=n,
        tile_w=tile_w,
        tile_h=tile_h,
        frame_count=len(video),
        pad_count=blocks[-1].pad_count,
    )
    if threads is not None and threads <= 1:
        record.blocks = [_hash_block(b, tile_w, tile_h) for b in blocks]
    else:
        workers = threads if threads else min(32, os.cpu_count() or 1)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            record.blocks = list(
                pool.map(lambda b: _hash_block(b, tile_w, tile_h), blocks)
            )
    return record


def compare(
    reference: HashRecord, query: HashRecord, d: int, mode: str = "dual"
) -> DetectionReport:
    """Per-block verdicts of a query record against a reference record.

    Blocks present on only one side (the videos differ in length) are
    reported operated with sentinel distances, and the report's
    length_mismatch flag is raised.
    """
    d = check_threshold(d)
    mode = check_mode(mode)
    if (reference.n, reference.tile_w, reference.tile_h) != (
        query.n,
        query.tile_w,
        query.tile_h,
    ):
        raise ConfigMismatch(
            f"reference hashed at n={reference.n} tile="
            f"{reference.tile_w}x{reference.tile_h}, query at n={query.n} "
            f"tile={query.tile_w}x{query.tile_h}"
        )
    report = DetectionReport(n=reference.n, d=d, mode=mode)
    shared = min(len(reference.blocks), len(query.blocks))
    total = max(len(reference.blocks), len(query.blocks))
    report.length_mismatch = len(reference.blocks) != len(query.blocks)
    for i in range(total):
        if i < shared:
            dist_primary = hamming_distance(reference.blocks[i][0], query.blocks[i][0])
            dist_corner = hamming_distance(reference.blocks[i][1], query.blocks[i][1])
        else:
            dist_primary = dist_corner = SURPLUS_DISTANCE
        combined = max(dist_primary, dist_corner)
        decisive = dist_primary if mode == "single" else combined
        report.verdicts.append(
            BlockVerdict(i, dist_primary, dist_corner, combined, decisive >= d)
        )
    report.video_operated = report.length_mismatch or any(
        v.operated for v in report.verdicts
    )
    return report


def detect(
    reference_dir: str | os.PathLike,
    query_dir: str | os.PathLike,
    n: int = 8,
    d: int = 23,
    mode: str = "dual",
    tile_w: int = 96,
    tile_h: int = 54,
    threads: int | None = None,
) -> DetectionReport:
    """Hash two frame directories and compare them in one step."""
    reference = hash_video(load_frame_dir(reference_dir), n, tile_w, tile_h, threads)
    query = hash_video(load_frame_dir(query_dir), n, tile_w, tile_h, threads)
    return compare(reference, query, d, mode)


class TamperDetector(BaseEstimator):
    """Estimator interface: fit on a reference video, predict on queries.

    Parameters
    ----------
    n : grid side; each block holds n*n frames.
    d : Hamming-distance threshold; distance >= d flags a block.
    mode : "dual" (max over both layouts, default) or "single".
    tile_w, tile_h : mosaic cell size frames are resized to.
    threads : worker threads for hashing; never changes results.

    After ``fit`` the reference hashes live in ``reference_record_``.
    ``predict`` returns one boolean per block (True = operated);
    ``decision_function`` returns the per-block distances the verdicts
    are thresholded on.
    """

    def __init__(self, n=8, d=23, mode="dual", tile_w=96, tile_h=54, threads=None):
        self.n = n
        self.d = d
        self.mode = mode
        self.tile_w = tile_w
        self.tile_h = tile_h
        self.threads = threads

    def fit(self, X, y=None):
        """Hash the reference video X (sequence of HxWx3 uint8 frames)."""
        self.reference_record_ = hash_video(
            X, self.n, self.tile_w, self.tile_h, self.threads
        )
        return self

    def fit_record(self, record: HashRecord):
        """Adopt an already-computed reference record (e.g. from a .vhr file)."""
        record.validate()
        self.n = record.n
        self.tile_w = record.tile_w
        self.tile_h = record.tile_h
        self.reference_record_ = record
        return self

    def _check_fitted(self):
        if not hasattr(self, "reference_record_"):
            raise RuntimeError("TamperDetector is not fitted; call fit() first")

    def report(self, X) -> DetectionReport:
        """Full detection report for a query video."""
        self._check_fitted()
        query = hash_video(X, self.n, self.tile_w, self.tile_h, self.threads)
        return compare(self.reference_record_, query, self.d, self.mode)

    def decision_function(self, X) -> np.ndarray:
        report = self.report(X)
        key = "dist_primary" if self.mode == "single" else "dist_combined"
        return np.array([getattr(v, key) for v in report.verdicts], dtype=np.int64)

    def predict(self, X) -> np.ndarray:
        report = self.report(X)
        return np.array([v.operated for v in report.verdicts], dtype=bool)
