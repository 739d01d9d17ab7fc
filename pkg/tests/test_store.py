"""Binary .vhr record serialisation."""

import struct

import numpy as np
import pytest

from vidseal.errors import BadMagic, InconsistentHeader, TruncatedFile
from vidseal.store import (
    BLOCK_SIZE,
    HEADER_SIZE,
    MAGIC,
    HashRecord,
    read_record,
    write_record,
)


def make_record(rng, n=8, blocks=1, frame_count=None, tile_w=96, tile_h=54):
    per_block = n * n
    if frame_count is None:
        frame_count = blocks * per_block
    pad = blocks * per_block - frame_count
    record = HashRecord(n, tile_w, tile_h, frame_count, pad)
    record.blocks = [
        (
            bytes(rng.integers(0, 256, 15, dtype=np.uint8)),
            bytes(rng.integers(0, 256, 15, dtype=np.uint8)),
        )
        for _ in range(blocks)
    ]
    return record


def test_layout_constants():
    assert HEADER_SIZE == 20
    assert BLOCK_SIZE == 30


def test_single_block_record_is_50_bytes(tmp_path):
    rng = np.random.default_rng(0)
    record = make_record(rng, n=8, blocks=1, frame_count=64)
    path = tmp_path / "one.vhr"
    write_record(record, path)
    data = path.read_bytes()
    assert len(data) == 50
    # Independent layout oracle: little-endian header then the two hashes.
    want = struct.pack("<4sHHHIHI", b"VHR1", 8, 96, 54, 64, 0, 1)
    want += record.blocks[0][0] + record.blocks[0][1]
    assert data == want


def test_56_block_record_is_1700_bytes(tmp_path):
    rng = np.random.default_rng(1)
    record = make_record(rng, n=8, blocks=56, frame_count=3540)
    path = tmp_path / "many.vhr"
    write_record(record, path)
    assert path.stat().st_size == 1700
    assert record.pad_count == 44


def test_write_read_roundtrip(tmp_path):
    rng = np.random.default_rng(2)
    for i in range(10):
        n = int(rng.integers(2, 12))
        blocks = int(rng.integers(1, 6))
        frame_count = blocks * n * n - int(rng.integers(0, n * n))
        record = make_record(
            rng,
            n=n,
            blocks=blocks,
            frame_count=frame_count,
            tile_w=int(rng.integers(8, 200)),
            tile_h=int(rng.integers(8, 200)),
        )
        path = tmp_path / f"r{i}.vhr"
        write_record(record, path)
        assert read_record(path) == record


def test_write_is_deterministic(tmp_path):
    rng = np.random.default_rng(3)
    record = make_record(rng, blocks=3, frame_count=150)
    write_record(record, tmp_path / "a.vhr")
    write_record(record, tmp_path / "b.vhr")
    assert (tmp_path / "a.vhr").read_bytes() == (tmp_path / "b.vhr").read_bytes()


def test_read_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.vhr"
    path.write_bytes(b"XXXX" + b"\x00" * 46)
    with pytest.raises(BadMagic):
        read_record(path)


def test_read_rejects_short_header(tmp_path):
    path = tmp_path / "short.vhr"
    path.write_bytes(MAGIC + b"\x00" * 8)
    with pytest.raises(TruncatedFile):
        read_record(path)


def test_read_rejects_truncated_payload(tmp_path):
    rng = np.random.default_rng(4)
    record = make_record(rng, blocks=3, frame_count=192)
    path = tmp_path / "cut.vhr"
    write_record(record, path)
    data = path.read_bytes()
    path.write_bytes(data[: HEADER_SIZE + 2 * BLOCK_SIZE])
    with pytest.raises(TruncatedFile):
        read_record(path)


def test_read_rejects_trailing_garbage(tmp_path):
    rng = np.random.default_rng(5)
    record = make_record(rng)
    path = tmp_path / "extra.vhr"
    write_record(record, path)
    path.write_bytes(path.read_bytes() + b"\x00")
    with pytest.raises(TruncatedFile):
        read_record(path)


def test_read_rejects_inconsistent_block_count(tmp_path):
    # Header declares 2 blocks for 64 frames at n=8 (should be 1).
    header = struct.pack("<4sHHHIHI", MAGIC, 8, 96, 54, 64, 0, 2)
    path = tmp_path / "inconsistent.vhr"
    path.write_bytes(header + b"\x00" * (2 * BLOCK_SIZE))
    with pytest.raises(InconsistentHeader):
        read_record(path)


def test_read_rejects_oversized_pad(tmp_path):
    header = struct.pack("<4sHHHIHI", MAGIC, 2, 96, 54, 4, 4, 1)
    path = tmp_path / "pad.vhr"
    path.write_bytes(header + b"\x00" * BLOCK_SIZE)
    with pytest.raises(InconsistentHeader):
        read_record(path)


def test_validate_rejects_wrong_block_count():
    record = HashRecord(8, 96, 54, 128, 0, blocks=[(b"\x00" * 15, b"\x00" * 15)])
    with pytest.raises(ValueError):
        record.validate()


def test_validate_rejects_wrong_hash_length():
    record = HashRecord(8, 96, 54, 64, 0, blocks=[(b"\x00" * 14, b"\x00" * 15)])
    with pytest.raises(ValueError):
        record.validate()


def test_expected_blocks_arithmetic():
    assert HashRecord(8, 96, 54, 3540, 44).expected_blocks() == 56
    assert HashRecord(8, 96, 54, 64, 0).expected_blocks() == 1
    assert HashRecord(8, 96, 54, 65, 63).expected_blocks() == 2
