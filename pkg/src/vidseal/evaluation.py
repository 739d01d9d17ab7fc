"""Block-level evaluation: accuracy, average precision, threshold sweeps.

The evaluation unit is the block (one mosaic pair).  A block's score is
its Hamming distance (layout max in dual mode), its label comes from the
simulation ground truth, and classification at threshold d uses the same
greater-or-equal rule as detection.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .detector import compare, hash_video
from .errors import EmptyEvaluation, EmptySweep, NoPositives
from .hashing import HASH_BITS
from .store import HashRecord
from .validation import check_grid_side, check_mode


@dataclass
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass
class SweepPoint:
    d: int
    precision: float | None
    recall: float | None
    acc: float


def accuracy(c: ConfusionCounts) -> float:
    if c.total == 0:
        raise EmptyEvaluation("no blocks evaluated")
    return (c.tp + c.tn) / c.total


def paired_scores(
    reference: HashRecord, query: HashRecord, labels, mode: str = "dual"
) -> tuple[np.ndarray, np.ndarray]:
    """Align one labeled query against the reference.

    Returns (scores, labels) with one entry per block of the longer side.
    Blocks beyond the shared length score the sentinel distance; a
    reference block with no query counterpart was deleted outright, so it
    is labeled positive.
    """
    labels = [bool(v) for v in labels]
    if len(labels) != len(query.blocks):
        raise ValueError(
            f"{len(labels)} labels for {len(query.blocks)} query blocks"
        )
    report = compare(reference, query, d=HASH_BITS, mode=mode)
    key = "dist_primary" if mode == "single" else "dist_combined"
    scores = np.array([getattr(v, key) for v in report.verdicts], dtype=np.int64)
    padded = labels + [True] * (len(scores) - len(labels))
    return scores, np.array(padded, dtype=bool)


def confusion_at(scores, labels, d: int) -> ConfusionCounts:
    """Classify scores at threshold d (score >= d means predicted positive)."""
    scores = np.asarray(scores)
    labels = np.asarray(labels, dtype=bool)
    predicted = scores >= d
    return ConfusionCounts(
        tp=int(np.sum(predicted & labels)),
        fp=int(np.sum(predicted & ~labels)),
        tn=int(np.sum(~predicted & ~labels)),
        fn=int(np.sum(~predicted & labels)),
    )


def average_precision(scores, labels) -> float:
    """Sum of precision-weighted recall steps over descending thresholds.

    Thresholds are the distinct observed scores, high to low, with recall
    starting at 0 above the maximum.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    positives = int(labels.sum())
    if positives == 0:
        raise NoPositives("average precision is not defined without positives")
    ap = 0.0
    recall_prev = 0.0
    for t in sorted(set(scores.tolist()), reverse=True):
        predicted = scores >= t
        tp = int(np.sum(predicted & labels))
        precision = tp / int(predicted.sum())
        recall = tp / positives
        ap += (recall - recall_prev) * precision
        recall_prev = recall
    return ap


def sweep(
    reference: HashRecord, queries, mode: str = "dual"
) -> list[SweepPoint]:
    """One SweepPoint per threshold d in 0..121, pooled over all queries.

    ``queries`` is a sequence of (HashRecord, block labels) pairs.
    """
    mode = check_mode(mode)
    all_scores: list[np.ndarray] = []
    all_labels: list[np.ndarray] = []
    for record, labels in queries:
        s, l = paired_scores(reference, record, labels, mode)
        all_scores.append(s)
        all_labels.append(l)
    if not all_scores or sum(len(s) for s in all_scores) == 0:
        raise EmptyEvaluation("sweep needs at least one evaluated block")
    scores = np.concatenate(all_scores)
    labels = np.concatenate(all_labels)
    points = []
    for d in range(HASH_BITS + 2):
        c = confusion_at(scores, labels, d)
        precision = c.tp / (c.tp + c.fp) if (c.tp + c.fp) else None
        recall = c.tp / (c.tp + c.fn) if (c.tp + c.fn) else None
        points.append(SweepPoint(d, precision, recall, accuracy(c)))
    return points


def calibrate_threshold(points) -> int:
    """Pick the operating threshold from a sweep.

    Prefer the largest d with perfect recall and no false positives; when
    the score distributions overlap, fall back to the d maximising
    accuracy (ties go to the larger d).
    """
    points = list(points)
    if not points:
        raise EmptySweep("cannot calibrate from an empty sweep")
    clean = [p.d for p in points if p.recall == 1.0 and p.precision == 1.0]
    if clean:
        return max(clean)
    best = max(points, key=lambda p: (p.acc, p.d))
    return best.d


def heatmap_experiment(
    n: int,
    mode: str = "single",
    tile_w: int = 96,
    tile_h: int = 54,
    threads: int | None = None,
) -> np.ndarray:
    """Distance as a function of where a black frame lands in the grid.

    Reference is one block of n*n white frames; each query blackens one
    position.  Cell (a, b) of the result holds the distance when the
    black frame is at position (a-1)*n + b, exposing the hash's corner
    blind spot in single mode.
    """
    n = check_grid_side(n)
    mode = check_mode(mode)
    white = np.full((tile_h, tile_w, 3), 255, dtype=np.uint8)
    black = np.zeros_like(white)
    reference_video = [white] * (n * n)
    reference = hash_video(reference_video, n, tile_w, tile_h, threads=1)

    def distance_at(pos: int) -> int:
        frames = list(reference_video)
        frames[pos] = black
        query = hash_video(frames, n, tile_w, tile_h, threads=1)
        verdict = compare(reference, query, d=HASH_BITS, mode=mode).verdicts[0]
        return verdict.dist_primary if mode == "single" else verdict.dist_combined

    if threads is not None and threads <= 1:
        distances = [distance_at(pos) for pos in range(n * n)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            distances = list(pool.map(distance_at, range(n * n)))
    return np.array(distances, dtype=np.int64).reshape(n, n)


def sweep_to_csv(points) -> str:
    """Plot-ready CSV: d,precision,recall,acc (blank when undefined)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["d", "precision", "recall", "acc"])
    for p in points:
        writer.writerow(
            [
                p.d,
                "" if p.precision is None else f"{p.precision:.6f}",
                "" if p.recall is None else f"{p.recall:.6f}",
                f"{p.acc:.6f}",
            ]
        )
    return buf.getvalue()


def heatmap_to_csv(matrix: np.ndarray) -> str:
    """Plot-ready CSV: row,col,distance with 1-based grid coordinates."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["row", "col", "distance"])
    for a in range(matrix.shape[0]):
        for b in range(matrix.shape[1]):
            writer.writerow([a + 1, b + 1, int(matrix[a, b])])
    return buf.getvalue()
