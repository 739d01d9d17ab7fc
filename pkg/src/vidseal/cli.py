"""Command-line front end.

Subcommands: hash, detect, simulate, eval, heatmap.  Exit codes are a
stable contract: 0 clean, 1 operated video (detect), 2 bad input or
configuration, 3 output I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import evaluation, simulate
from .detector import compare, hash_video
from .errors import ConfigMismatch, NoPositives, VidsealError
from .imaging import load_frame_dir, save_frame_dir
from .store import read_record, write_record

THREADS_ENV = "VIDSEAL_THREADS"

EXIT_CLEAN = 0
EXIT_OPERATED = 1
EXIT_BAD_INPUT = 2
EXIT_IO = 3


@dataclass
class RunConfig:
    n: int = 8
    d: int = 23
    mode: str = "dual"
    tile_w: int = 96
    tile_h: int = 54
    seed: int = 0
    threads: int | None = None


class InputError(Exception):
    """Anything wrong with inputs or configuration (exit 2)."""


def _parse_tile(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError as exc:
        raise InputError(f"--tile expects WxH (e.g. 96x54), got {text!r}") from exc


def resolve_config(args) -> RunConfig:
    """Defaults, overridden by the config file, overridden by flags.

    VIDSEAL_THREADS fills in --threads when the flag is absent.
    """
    cfg = RunConfig()
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            doc = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {config_path}: {exc}") from exc
        for key in ("n", "d", "seed", "threads"):
            if doc.get(key) is not None:
                setattr(cfg, key, int(doc[key]))
        if doc.get("mode") is not None:
            cfg.mode = str(doc["mode"])
        if doc.get("tile_w") is not None:
            cfg.tile_w = int(doc["tile_w"])
        if doc.get("tile_h") is not None:
            cfg.tile_h = int(doc["tile_h"])
    env_threads = os.environ.get(THREADS_ENV)
    if env_threads:
        try:
            cfg.threads = int(env_threads)
        except ValueError as exc:
            raise InputError(f"{THREADS_ENV} must be an integer") from exc
    for key in ("n", "d", "mode", "seed", "threads"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "tile", None) is not None:
        cfg.tile_w, cfg.tile_h = _parse_tile(args.tile)
    return cfg


def _check_record_overrides(record, args) -> None:
    """A record fixes n and tile size; explicit conflicting flags are errors."""
    if getattr(args, "n", None) is not None and args.n != record.n:
        raise ConfigMismatch(f"record was hashed at n={record.n}, flag says {args.n}")
    if getattr(args, "tile", None) is not None:
        tile_w, tile_h = _parse_tile(args.tile)
        if (tile_w, tile_h) != (record.tile_w, record.tile_h):
            raise ConfigMismatch(
                f"record was hashed at tile {record.tile_w}x{record.tile_h}, "
                f"flag says {tile_w}x{tile_h}"
            )


def cmd_hash(args) -> int:
    cfg = resolve_config(args)
    try:
        frames = load_frame_dir(args.frames_dir)
        record = hash_video(frames, cfg.n, cfg.tile_w, cfg.tile_h, cfg.threads)
    except (VidsealError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        write_record(record, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    plural = "" if len(record.blocks) == 1 else "s"
    print(f"{len(record.blocks)} block{plural} -> {args.out}")
    return EXIT_CLEAN


def cmd_detect(args) -> int:
    cfg = resolve_config(args)
    try:
        record = read_record(args.record)
        _check_record_overrides(record, args)
        frames = load_frame_dir(args.query_dir)
        query = hash_video(
            frames, record.n, record.tile_w, record.tile_h, cfg.threads
        )
        report = compare(record, query, cfg.d, cfg.mode)
    except (VidsealError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        if args.out:
            Path(args.out).write_text(report.to_json())
        else:
            sys.stdout.write(report.to_json())
        if args.csv:
            Path(args.csv).write_text(report.to_csv())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    flagged = sum(v.operated for v in report.verdicts)
    print(f"{flagged}/{len(report.verdicts)} blocks operated", file=sys.stderr)
    return EXIT_OPERATED if report.video_operated else EXIT_CLEAN


def _load_tamper_specs(doc: dict, spec_dir: Path, seed: int):
    specs = []
    for op_doc in doc.get("operations", []):
        op = op_doc.get("op")
        positions = op_doc.get("positions", [])
        donor = None
        if "donor" in op_doc and op_doc["donor"] is not None:
            donor_path = Path(op_doc["donor"])
            if not donor_path.is_absolute():
                donor_path = spec_dir / donor_path
            donor = load_frame_dir(donor_path)
        specs.append(
            simulate.TamperSpec(
                op=op,
                positions=positions,
                donor=donor,
                seed=int(op_doc.get("seed", seed)),
            )
        )
    return specs


def cmd_simulate(args) -> int:
    cfg = resolve_config(args)
    try:
        doc = json.loads(Path(args.spec).read_text())
        if not isinstance(doc, dict):
            raise InputError(f"{args.spec}: spec must be a JSON object")
        seed = int(doc.get("seed", cfg.seed))
        n = cfg.n if args.n is not None else int(doc.get("n", cfg.n))
        video = load_frame_dir(args.src_dir)
        specs = _load_tamper_specs(doc, Path(args.spec).parent, seed)
        video, truth = simulate.apply_tamper_sequence(video, specs)
        distort = dict(doc.get("distort") or {})
        if "preset" in distort:
            distort = dict(simulate.SNS_PRESETS[distort.pop("preset")])
        if distort.get("jpeg_quality") is not None:
            video = simulate.distort_jpeg(video, int(distort["jpeg_quality"]))
        if distort.get("resize_scale") is not None:
            video = simulate.distort_resize(video, float(distort["resize_scale"]))
    except (VidsealError, FileNotFoundError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        save_frame_dir(video, args.out_dir)
        spec_echo = {"seed": seed, "n": n, **doc}
        simulate.write_truth(truth, spec_echo, n, Path(args.out_dir) / "truth.json")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    flagged = sum(truth.frame_flags)
    print(f"{len(video)} frames ({flagged} operated) -> {args.out_dir}")
    return EXIT_CLEAN


def cmd_eval(args) -> int:
    cfg = resolve_config(args)
    try:
        reference = read_record(args.record)
        _check_record_overrides(reference, args)
        manifest = json.loads(Path(args.manifest).read_text())
        entries = manifest.get("queries")
        if not entries:
            raise InputError(f"{args.manifest}: no queries listed")
        manifest_dir = Path(args.manifest).parent

        def resolve(p):
            p = Path(p)
            return p if p.is_absolute() else manifest_dir / p

        labeled = []
        names = []
        for entry in entries:
            frames = load_frame_dir(resolve(entry["frames"]))
            record = hash_video(
                frames, reference.n, reference.tile_w, reference.tile_h, cfg.threads
            )
            if entry.get("truth"):
                truth_doc = simulate.read_truth(resolve(entry["truth"]))
                labels = simulate.GroundTruth(truth_doc["frame_flags"]).block_labels(
                    reference.n
                )
            else:
                labels = [False] * len(record.blocks)
            labeled.append((record, labels))
            names.append(entry.get("name", str(entry["frames"])))

        for name, (record, labels) in zip(names, labeled):
            scores, block_labels = evaluation.paired_scores(
                reference, record, labels, cfg.mode
            )
            acc = evaluation.accuracy(evaluation.confusion_at(scores, block_labels, cfg.d))
            try:
                ap = f"{evaluation.average_precision(scores, block_labels):.4f}"
            except NoPositives:
                ap = "not defined"
            print(f"{name}: Acc={acc:.4f} AP={ap}")
        points = evaluation.sweep(reference, labeled, cfg.mode)
    except (VidsealError, FileNotFoundError, KeyError, TypeError, ValueError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        if args.out:
            Path(args.out).write_text(evaluation.sweep_to_csv(points))
        if args.calibrate_out:
            d_star = evaluation.calibrate_threshold(points)
            doc = {"n": reference.n, "d": d_star, "mode": cfg.mode,
                   "tile_w": reference.tile_w, "tile_h": reference.tile_h}
            Path(args.calibrate_out).write_text(json.dumps(doc, indent=2) + "\n")
            print(f"calibrated d={d_star} -> {args.calibrate_out}")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_CLEAN


def cmd_heatmap(args) -> int:
    cfg = resolve_config(args)
    try:
        matrix = evaluation.heatmap_experiment(
            cfg.n, cfg.mode, cfg.tile_w, cfg.tile_h, cfg.threads
        )
    except VidsealError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        Path(args.out).write_text(evaluation.heatmap_to_csv(matrix))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"{cfg.n}x{cfg.n} heatmap -> {args.out}")
    return EXIT_CLEAN


def _add_common(parser, *, tile=True):
    parser.add_argument("--n", type=int, default=None, help="grid side (default 8)")
    parser.add_argument("--d", type=int, default=None, help="distance threshold (default 23)")
    parser.add_argument("--mode", choices=("single", "dual"), default=None)
    if tile:
        parser.add_argument("--tile", default=None, metavar="WxH", help="tile size (default 96x54)")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument(
        "--threads", type=int, default=None,
        help=f"hash worker threads (default: all cores; ${THREADS_ENV} as fallback)",
    )
    parser.add_argument("--config", default=None, help="JSON config/calibration file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vidseal",
        description="Detect temporally tampered videos via tile-mosaic robust hashes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hash", help="hash a reference frame directory into a .vhr record")
    p.add_argument("frames_dir")
    p.add_argument("--out", required=True, help="output .vhr path")
    _add_common(p)
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("detect", help="compare a query frame directory to a .vhr record")
    p.add_argument("record")
    p.add_argument("query_dir")
    p.add_argument("--out", default=None, help="report JSON path (default: stdout)")
    p.add_argument("--csv", default=None, help="also write per-block CSV here")
    _add_common(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("simulate", help="apply tamper/distortion spec to a frame directory")
    p.add_argument("src_dir")
    p.add_argument("spec", help="JSON tamper spec")
    p.add_argument("out_dir")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("eval", help="score labeled queries against a reference record")
    p.add_argument("record")
    p.add_argument("manifest", help="JSON manifest listing query dirs and truth files")
    p.add_argument("--out", default=None, help="sweep CSV path")
    p.add_argument("--calibrate-out", default=None, help="write calibrated config JSON here")
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("heatmap", help="black-frame position vs distance experiment")
    p.add_argument("--out", required=True, help="heatmap CSV path")
    _add_common(p)
    p.set_defaults(func=cmd_heatmap)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
