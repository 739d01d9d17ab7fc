"""Acceptance suite: the nine headline criteria, one verdict line each.

Criteria 1-3 rebuild the evaluation scenario end to end from fixed seeds:
three gradient-motion source videos (9 blocks at n = 8), platform-style
distortions of the clean sources, and a tamper mix touching about 15% of
the frames with all four operations.  Criteria 4-9 are exact property
suites over the hashing, evaluation, store, and CLI layers.
"""

import json
import time
from contextlib import contextmanager
from types import SimpleNamespace

import numpy as np
import pytest

from vidseal.cli import main
from vidseal.detector import compare, hash_video
from vidseal.evaluation import (
    accuracy,
    average_precision,
    calibrate_threshold,
    confusion_at,
    heatmap_experiment,
    paired_scores,
    sweep,
)
from vidseal.hashing import HASH_BITS, hamming_distance, pack_bits
from vidseal.imaging import save_frame_dir
from vidseal.simulate import (
    TamperSpec,
    apply_tamper_sequence,
    distort_jpeg,
    distort_resize,
    synth_video,
)
from vidseal.store import HashRecord, read_record, write_record
from vidseal.tiling import corner_to_center_permutation


@contextmanager
def criterion(num, name):
    try:
        yield
    except BaseException:
        print(f"criterion {num} ({name}): FAIL")
        raise
    print(f"criterion {num} ({name}): PASS")


@pytest.fixture(scope="module")
def pipeline():
    """Reference, distorted-clean, and tampered datasets, hashed once."""
    t0 = time.monotonic()
    w, h = 320, 180
    source = []
    for seed in (101, 102, 103):
        source += synth_video("gradient_motion", 192, w, h, seed=seed)
    donor = synth_video("gradient_motion", 64, w, h, seed=999)

    # Blocks are 64-frame spans.  Positive blocks: 0 (replace run), 1
    # (reorder), 4 (equal-size delete+insert), 5 (replace at the four
    # mosaic corner positions only), 7 (replace run), 8 (reorder).
    specs = [
        TamperSpec("replace", list(range(30, 50)), donor=donor),
        TamperSpec("reorder", list(range(64, 128, 4)), seed=5),
        TamperSpec("delete", list(range(280, 290))),
        TamperSpec("insert", [280] * 10, donor=donor),
        TamperSpec("replace", [320 + p for p in (0, 7, 56, 63)], donor=donor),
        TamperSpec("replace", list(range(448, 468)), donor=donor),
        TamperSpec("reorder", list(range(512, 576, 5)), seed=9),
    ]
    tampered, truth = apply_tamper_sequence(source, specs)
    labels = truth.block_labels(8)
    clean = [False] * len(labels)

    tampered_jpeg = distort_jpeg(tampered, 75)
    datasets = {
        "0-1": (distort_jpeg(source, 75), clean),
        "0-2": (distort_resize(distort_jpeg(source, 75), 0.9), clean),
        "1-0": (tampered, labels),
        "1-1": (tampered_jpeg, labels),
        "1-2": (distort_resize(tampered_jpeg, 0.9), labels),
    }
    reference = hash_video(source, 8, 96, 54)
    records = {k: (hash_video(v, 8, 96, 54), lab) for k, (v, lab) in datasets.items()}
    points = sweep(reference, list(records.values()), mode="dual")
    return SimpleNamespace(
        reference=reference,
        records=records,
        tamper_ratio=sum(truth.frame_flags) / len(truth.frame_flags),
        calibrated_d=calibrate_threshold(points),
        build_seconds=time.monotonic() - t0,
    )


def test_criterion_1_clean_robustness(pipeline):
    t0 = time.monotonic()
    with criterion(1, "clean robustness"):
        d = pipeline.calibrated_d
        for name in ("0-1", "0-2"):
            record, labels = pipeline.records[name]
            report = compare(pipeline.reference, record, d, mode="dual")
            assert not report.video_operated, name
            assert sum(v.operated for v in report.verdicts) == 0, name
            scores, block_labels = paired_scores(
                pipeline.reference, record, labels, mode="dual"
            )
            assert accuracy(confusion_at(scores, block_labels, d)) == 1.0, name
        assert pipeline.build_seconds + (time.monotonic() - t0) < 120


def test_criterion_2_tamper_detection(pipeline):
    t0 = time.monotonic()
    with criterion(2, "tamper detection"):
        assert 0.10 <= pipeline.tamper_ratio <= 0.20
        d = pipeline.calibrated_d
        pooled = {"single": ([], []), "dual": ([], [])}
        for name in ("1-0", "1-1", "1-2"):
            record, labels = pipeline.records[name]
            for mode in ("single", "dual"):
                scores, block_labels = paired_scores(
                    pipeline.reference, record, labels, mode=mode
                )
                pooled[mode][0].append(scores)
                pooled[mode][1].append(block_labels)
                if mode == "dual":
                    assert average_precision(scores, block_labels) >= 0.95, name
                    acc = accuracy(confusion_at(scores, block_labels, d))
                    assert acc >= 0.95, name
        ap = {
            mode: average_precision(np.concatenate(s), np.concatenate(l))
            for mode, (s, l) in pooled.items()
        }
        assert ap["single"] <= ap["dual"]
        assert pipeline.build_seconds + (time.monotonic() - t0) < 300


def test_criterion_3_corner_heatmap():
    t0 = time.monotonic()
    with criterion(3, "corner blind-spot heatmap"):
        single = heatmap_experiment(10, mode="single")
        dual = heatmap_experiment(10, mode="dual")
        median = np.median(single)
        for corner in ((0, 0), (0, 9), (9, 0), (9, 9)):
            assert single[corner] < median, (corner, single[corner], median)
        assert dual.min() > single.min()
        assert time.monotonic() - t0 < 180


def test_criterion_4_hamming_oracle():
    with criterion(4, "packed Hamming distance vs naive bit loop"):
        rng = np.random.default_rng(42)
        pairs = rng.integers(0, 256, size=(10_000, 2, 15), dtype=np.uint8)
        for row in pairs:
            a, b = bytes(row[0]), bytes(row[1])
            naive = 0
            for x, y in zip(a, b):
                v = x ^ y
                for bit in range(8):
                    naive += (v >> bit) & 1
            assert hamming_distance(a, b) == naive


def test_criterion_5_average_precision_oracle():
    with criterion(5, "average precision vs brute-force enumeration"):
        assert average_precision([3, 2, 1], [True, False, True]) == pytest.approx(5 / 6)
        rng = np.random.default_rng(43)
        for _ in range(1_000):
            m = int(rng.integers(1, 30))
            scores = [int(v) for v in rng.integers(0, 121, size=m)]
            labels = [bool(v) for v in rng.random(m) < 0.4]
            if not any(labels):
                labels[int(rng.integers(0, m))] = True
            positives = sum(labels)
            want = 0.0
            r_prev = 0.0
            for t in sorted(set(scores), reverse=True):
                tp = sum(1 for s, y in zip(scores, labels) if s >= t and y)
                pred = sum(1 for s in scores if s >= t)
                r = tp / positives
                want += (r - r_prev) * (tp / pred)
                r_prev = r
            assert average_precision(scores, labels) == want


def test_criterion_6_permutation_suite():
    with criterion(6, "corner-to-center permutation properties"):
        def dist2(cell, n):
            a, b = divmod(cell, n)
            return (2 * (a + 1) - (n + 1)) ** 2 + (2 * (b + 1) - (n + 1)) ** 2

        for n in range(2, 17):
            perm = corner_to_center_permutation(n)
            assert sorted(perm) == list(range(n * n)), n
        assert corner_to_center_permutation(2) == (0, 1, 2, 3)
        assert corner_to_center_permutation(3) == (4, 7, 1, 0, 8, 2, 3, 6, 5)
        for n in range(3, 17):
            perm = corner_to_center_permutation(n)
            for corner in (0, n - 1, n * n - n, n * n - 1):
                assert dist2(perm[corner], n) < dist2(corner, n), (n, corner)


def test_criterion_7_store_golden(tmp_path):
    with criterion(7, "record store golden and round trip"):
        video = synth_video("gradient_motion", 64, 32, 20, seed=7)
        record = hash_video(video, 8, 16, 10)
        path = tmp_path / "single.vhr"
        write_record(record, path)
        assert path.stat().st_size == 50
        assert read_record(path) == record

        rng = np.random.default_rng(44)
        for i in range(100):
            n = int(rng.integers(2, 20))
            blocks = int(rng.integers(1, 10))
            frame_count = blocks * n * n - int(rng.integers(0, n * n))
            random_record = HashRecord(
                n=n,
                tile_w=int(rng.integers(8, 2000)),
                tile_h=int(rng.integers(8, 2000)),
                frame_count=frame_count,
                pad_count=blocks * n * n - frame_count,
            )
            random_record.blocks = [
                (
                    bytes(rng.integers(0, 256, 15, dtype=np.uint8)),
                    bytes(rng.integers(0, 256, 15, dtype=np.uint8)),
                )
                for _ in range(blocks)
            ]
            p = tmp_path / f"r{i}.vhr"
            write_record(random_record, p)
            assert read_record(p) == random_record


def test_criterion_8_thread_determinism(tmp_path):
    with criterion(8, "byte-identical outputs across thread counts"):
        ref = synth_video("gradient_motion", 8, 32, 20, seed=55)
        query = ref[:4] + synth_video("gradient_motion", 4, 32, 20, seed=56)
        save_frame_dir(ref, tmp_path / "ref")
        save_frame_dir(query, tmp_path / "query")
        outputs = {}
        for threads in ("1", "4"):
            record_path = tmp_path / f"ref_t{threads}.vhr"
            report_path = tmp_path / f"report_t{threads}.json"
            assert main(
                [
                    "hash",
                    str(tmp_path / "ref"),
                    "--out",
                    str(record_path),
                    "--n",
                    "2",
                    "--tile",
                    "16x10",
                    "--threads",
                    threads,
                ]
            ) == 0
            main(
                [
                    "detect",
                    str(record_path),
                    str(tmp_path / "query"),
                    "--out",
                    str(report_path),
                    "--threads",
                    threads,
                ]
            )
            outputs[threads] = (record_path.read_bytes(), report_path.read_bytes())
        assert outputs["1"] == outputs["4"]
        json.loads(outputs["1"][1])


def test_criterion_9_threshold_boundary():
    with criterion(9, "greater-or-equal decision boundary"):
        for d in (1, 23, 60, 120):
            ref = HashRecord(2, 16, 10, 4, 0, blocks=[(b"\x00" * 15, b"\x00" * 15)])
            at = np.zeros(HASH_BITS, dtype=bool)
            at[:d] = True
            below = np.zeros(HASH_BITS, dtype=bool)
            below[: d - 1] = True
            query_at = HashRecord(
                2, 16, 10, 4, 0, blocks=[(pack_bits(at), pack_bits(at))]
            )
            query_below = HashRecord(
                2, 16, 10, 4, 0, blocks=[(pack_bits(below), pack_bits(below))]
            )
            report = compare(ref, query_at, d)
            assert report.verdicts[0].dist_combined == d
            assert report.verdicts[0].operated
            assert report.video_operated
            report = compare(ref, query_below, d)
            assert report.verdicts[0].dist_combined == d - 1
            assert not report.verdicts[0].operated
            assert not report.video_operated
