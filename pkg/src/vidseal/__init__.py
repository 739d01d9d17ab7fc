"""vidseal: detect temporally tampered videos with a tile-mosaic robust hash.

A reference video is cut into blocks of n*n frames; each block is tiled
into a mosaic image under two cell layouts and hashed with a 120-bit
quaternion polar cosine hash.  A query video is hashed the same way, and
any block whose Hamming distance reaches the threshold d is flagged as
operated.  The hash survives recompression and resizing, so benign
re-uploads stay below threshold while inserted, deleted, reordered, or
replaced frames rise above it.
"""

from .detector import (
    BlockVerdict,
    DetectionReport,
    TamperDetector,
    compare,
    detect,
    hash_video,
)
from .errors import VidsealError
from .evaluation import (
    ConfusionCounts,
    SweepPoint,
    accuracy,
    average_precision,
    calibrate_threshold,
    heatmap_experiment,
    sweep,
)
from .hashing import compute_hash, hamming_distance, hash_from_hex, hash_to_hex
from .imaging import load_frame, load_frame_dir, save_frame, save_frame_dir
from .simulate import (
    GroundTruth,
    TamperSpec,
    apply_tamper,
    apply_tamper_sequence,
    distort_jpeg,
    distort_resize,
    synth_video,
)
from .store import HashRecord, read_record, write_record
from .tiling import GridOrdering, corner_to_center_permutation, partition, tile

__version__ = "0.1.0"

__all__ = [
    "BlockVerdict",
    "ConfusionCounts",
    "DetectionReport",
    "GridOrdering",
    "GroundTruth",
    "HashRecord",
    "SweepPoint",
    "TamperDetector",
    "TamperSpec",
    "VidsealError",
    "accuracy",
    "apply_tamper",
    "apply_tamper_sequence",
    "average_precision",
    "calibrate_threshold",
    "compare",
    "compute_hash",
    "corner_to_center_permutation",
    "detect",
    "distort_jpeg",
    "distort_resize",
    "hamming_distance",
    "hash_from_hex",
    "hash_to_hex",
    "hash_video",
    "heatmap_experiment",
    "load_frame",
    "load_frame_dir",
    "partition",
    "read_record",
    "save_frame",
    "save_frame_dir",
    "sweep",
    "synth_video",
    "tile",
    "write_record",
]
