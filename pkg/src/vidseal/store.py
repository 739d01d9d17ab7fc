"""Bit-exact persistence of video hash records (.vhr files).

Layout, little-endian throughout:

    offset  size  field
    0       4     magic "VHR1"
    4       2     u16 grid side n
    6       2     u16 tile width
    8       2     u16 tile height
    10      4     u32 source frame count
    14      2     u16 final-block pad count
    16      4     u32 block count
    20      30*k  per block: 15-byte sequential hash, 15-byte
                  corner-to-center hash

Block count must equal ceil(frame_count / n^2); files violating that are
rejected on read.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass, field

from .errors import BadMagic, InconsistentHeader, TruncatedFile
from .hashing import HASH_BYTES

MAGIC = b"VHR1"
_HEADER = struct.Struct("<4sHHHIHI")
HEADER_SIZE = _HEADER.size  # 20
BLOCK_SIZE = 2 * HASH_BYTES  # 30


@dataclass
class HashRecord:
    """Hashes of every block of one video under both mosaic layouts."""

    n: int
    tile_w: int
    tile_h: int
    frame_count: int
    pad_count: int
    blocks: list[tuple[bytes, bytes]] = field(default_factory=list)

    def expected_blocks(self) -> int:
        return math.ceil(self.frame_count / (self.n * self.n))

    def validate(self) -> None:
        if self.n < 2:
            raise ValueError(f"grid side must be >= 2, got {self.n}")
        if not 0 <= self.pad_count < self.n * self.n:
            raise ValueError(f"pad count {self.pad_count} out of range")
        if len(self.blocks) != self.expected_blocks():
            raise ValueError(
                f"{len(self.blocks)} blocks stored, expected {self.expected_blocks()}"
            )
        for primary, corner in self.blocks:
            if len(primary) != HASH_BYTES or len(corner) != HASH_BYTES:
                raise ValueError("each hash must be 15 bytes")


def write_record(record: HashRecord, path: str | os.PathLike) -> None:
    """Serialise a record; the same record always yields identical bytes."""
    record.validate()
    header = _HEADER.pack(
        MAGIC,
        record.n,
        record.tile_w,
        record.tile_h,
        record.frame_count,
        record.pad_count,
        len(record.blocks),
    )
    with open(path, "wb") as fh:
        fh.write(header)
        for primary, corner in record.blocks:
            fh.write(primary)
            fh.write(corner)


def read_record(path: str | os.PathLike) -> HashRecord:
    """Parse and validate a .vhr file; exact inverse of write_record."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic(f"{path}: not a VHR1 file")
    if len(data) < HEADER_SIZE:
        raise TruncatedFile(f"{path}: header cut short")
    _, n, tile_w, tile_h, frame_count, pad_count, block_count = _HEADER.unpack(
        data[:HEADER_SIZE]
    )
    record = HashRecord(n, tile_w, tile_h, frame_count, pad_count)
    if n < 2 or block_count != record.expected_blocks() or pad_count >= n * n:
        raise InconsistentHeader(
            f"{path}: {block_count} blocks declared for {frame_count} frames "
            f"at n={n}, pad={pad_count}"
        )
    body = data[HEADER_SIZE:]
    if len(body) != block_count * BLOCK_SIZE:
        raise TruncatedFile(
            f"{path}: payload holds {len(body) // BLOCK_SIZE} blocks, "
            f"header declares {block_count}"
        )
    for b in range(block_count):
        at = b * BLOCK_SIZE
        record.blocks.append(
            (bytes(body[at : at + HASH_BYTES]), bytes(body[at + HASH_BYTES : at + BLOCK_SIZE]))
        )
    return record
