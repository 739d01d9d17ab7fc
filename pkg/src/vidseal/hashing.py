"""120-bit robust hash of an RGB image.

Pipeline: Gaussian blur (5x5, sigma 1) -> bilinear resize to 128x128 ->
quaternion polar cosine moments over the inscribed unit disk -> median
binarisation.  Hashes are 15-byte strings compared by Hamming distance.

Each pixel is treated as the pure quaternion iR + jG + kB.  The moment of
radial order s and angular repetition l is

    M[s, l] = sum over disk pixels of  f(x, y) * cos(pi * s * rho^2)
              * exp(-mu * l * theta) * dA,

with rho, theta the polar coordinates of the pixel centre, mu the unit
pure quaternion (i + j + k) / sqrt(3), and dA the pixel area (2/128)^2.
The feature kept per (s, l) is the quaternion norm |M[s, l]|; magnitudes
are invariant to image rotation, and pixels outside the disk (the mosaic
corners) never contribute.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NonFiniteFeature
from .imaging import gaussian_blur_5x5, resize_bilinear, to_float
from .validation import check_frame

HASH_BITS = 120
HASH_BYTES = HASH_BITS // 8

GRID_SIZE = 128
RADIAL_ORDERS = 8
ANGULAR_ORDERS = 15

_SQRT3 = np.sqrt(3.0)
_PIXEL_AREA = (2.0 / GRID_SIZE) ** 2


class _DiskBasis:
    """Precomputed kernel tables for the 128x128 inscribed-disk grid."""

    def __init__(self):
        # Pixel centres in [-1, 1]; row-major like the image itself.
        coords = (2.0 * np.arange(GRID_SIZE) + 1.0) / GRID_SIZE - 1.0
        yy, xx = np.meshgrid(coords, coords, indexing="ij")
        rho2 = xx**2 + yy**2
        self.mask = rho2 <= 1.0
        theta = np.arctan2(yy[self.mask], xx[self.mask])
        rho2 = rho2[self.mask]

        s = np.arange(RADIAL_ORDERS)[:, None]
        l = np.arange(ANGULAR_ORDERS)[:, None]
        radial = np.cos(np.pi * s * rho2[None, :])          # (8, P)
        cos_ang = np.cos(l * theta[None, :])                # (15, P)
        sin_ang = np.sin(l * theta[None, :])                # (15, P)

        # (120, P) tables so one matmul per image yields every moment.
        self.cos_table = (radial[:, None, :] * cos_ang[None, :, :]).reshape(
            RADIAL_ORDERS * ANGULAR_ORDERS, -1
        )
        self.sin_table = (radial[:, None, :] * sin_ang[None, :, :]).reshape(
            RADIAL_ORDERS * ANGULAR_ORDERS, -1
        )


_BASIS: _DiskBasis | None = None


def _basis() -> _DiskBasis:
    global _BASIS
    if _BASIS is None:
        _BASIS = _DiskBasis()
    return _BASIS


def preprocess(frame: np.ndarray) -> np.ndarray:
    """Blur then resize a frame to the 128x128 float image that gets hashed."""
    return resize_bilinear(gaussian_blur_5x5(to_float(frame)), GRID_SIZE, GRID_SIZE)


def qpct_features(img: np.ndarray) -> np.ndarray:
    """Quaternion polar cosine moment magnitudes of a 128x128 float image.

    Returns 120 values, entry s * 15 + l holding |M[s, l]|.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.shape != (GRID_SIZE, GRID_SIZE, 3):
        raise DimensionMismatch(
            f"expected {GRID_SIZE}x{GRID_SIZE}x3 image, got {img.shape}"
        )
    basis = _basis()
    rgb = img[basis.mask]                                   # (P, 3)
    r, g, b = rgb[:, 0], rgb[:, 1], rgb[:, 2]
    # Expanding f * (cos - mu*sin) per quaternion component gives sums over
    # these seven pixel channels against the cos/sin kernel tables.
    channels = np.stack(
        [r, g, b, (r + g + b), (g - b), (b - r), (r - g)], axis=1
    )                                                       # (P, 7)
    cos_part = basis.cos_table @ channels                   # (120, 7)
    sin_part = basis.sin_table @ channels

    w = sin_part[:, 3] / _SQRT3
    x = cos_part[:, 0] - sin_part[:, 4] / _SQRT3
    y = cos_part[:, 1] - sin_part[:, 5] / _SQRT3
    z = cos_part[:, 2] - sin_part[:, 6] / _SQRT3
    return _PIXEL_AREA * np.sqrt(w**2 + x**2 + y**2 + z**2)


def binarize(features: np.ndarray) -> bytes:
    """Threshold features at their median into a packed 120-bit hash.

    The median of the even-length vector is the lower of the two middle
    order statistics, so bit counts and ties are deterministic.
    """
    features = np.asarray(features, dtype=np.float64)
    if features.shape != (HASH_BITS,):
        raise DimensionMismatch(f"expected {HASH_BITS} features, got {features.shape}")
    if not np.all(np.isfinite(features)):
        raise NonFiniteFeature("features contain NaN or infinity")
    median = np.partition(features, HASH_BITS // 2 - 1)[HASH_BITS // 2 - 1]
    return pack_bits(features >= median)


def compute_hash(frame: np.ndarray) -> bytes:
    """120-bit robust hash of one frame (or mosaic), as 15 bytes."""
    return binarize(qpct_features(preprocess(check_frame(frame))))


def pack_bits(bits) -> bytes:
    """Pack 120 bits into 15 bytes, bit k at byte k//8, LSB first."""
    bits = np.asarray(bits, dtype=bool)
    if bits.shape != (HASH_BITS,):
        raise ValueError(f"expected {HASH_BITS} bits, got {bits.shape}")
    return np.packbits(bits, bitorder="little").tobytes()


def unpack_bits(hash_value: bytes) -> np.ndarray:
    """Inverse of pack_bits: 15 bytes -> bool array of 120 bits."""
    if len(hash_value) != HASH_BYTES:
        raise ValueError(f"expected {HASH_BYTES} bytes, got {len(hash_value)}")
    return np.unpackbits(
        np.frombuffer(hash_value, dtype=np.uint8), bitorder="little"
    ).astype(bool)


def hash_to_hex(hash_value: bytes) -> str:
    """30 lowercase hex digits; bit 0 is the LSB of the first hex pair."""
    if len(hash_value) != HASH_BYTES:
        raise ValueError(f"expected {HASH_BYTES} bytes, got {len(hash_value)}")
    return hash_value.hex()


def hash_from_hex(text: str) -> bytes:
    raw = bytes.fromhex(text)
    if len(raw) != HASH_BYTES:
        raise ValueError(f"expected {2 * HASH_BYTES} hex digits, got {len(text)}")
    return raw


def hamming_distance(a: bytes, b: bytes) -> int:
    """Number of differing bits between two 120-bit hashes."""
    if len(a) != HASH_BYTES or len(b) != HASH_BYTES:
        raise ValueError("hashes must be 15 bytes")
    return (int.from_bytes(a, "little") ^ int.from_bytes(b, "little")).bit_count()
