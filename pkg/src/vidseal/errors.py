"""Exception types raised across the package."""


class VidsealError(Exception):
    """Base class for all vidseal errors."""


# --- image decoding / encoding ---

class UnsupportedFormat(VidsealError, ValueError):
    """File is not one of the supported image formats (PNG, binary PPM)."""


class CorruptImage(VidsealError, ValueError):
    """File claims a supported format but its payload cannot be decoded."""


class FrameSequenceError(VidsealError, ValueError):
    """Frame directory is not a contiguous frame_%06d sequence."""


# --- geometry / pipeline preconditions ---

class InvalidDimensions(VidsealError, ValueError):
    """Requested output dimensions are out of range."""


class DimensionMismatch(VidsealError, ValueError):
    """Image does not have the dimensions a stage requires."""


class NonFiniteFeature(VidsealError, ValueError):
    """Feature vector contains NaN or infinity."""


class EmptyVideo(VidsealError, ValueError):
    """Operation needs at least one frame."""


class HeterogeneousDimensions(VidsealError, ValueError):
    """Frames in one video differ in size."""


class InvalidGrid(VidsealError, ValueError):
    """Grid side must be at least 2."""


# --- detection ---

class ConfigMismatch(VidsealError, ValueError):
    """Reference and query were hashed under different settings."""


# --- hash record files ---

class BadMagic(VidsealError, ValueError):
    """File does not start with the hash-record magic."""


class TruncatedFile(VidsealError, ValueError):
    """Hash-record file is shorter than its header promises."""


class InconsistentHeader(VidsealError, ValueError):
    """Hash-record header fields contradict each other."""


# --- tamper simulation ---

class OutOfBounds(VidsealError, ValueError):
    """Tamper positions fall outside the video."""


class MissingDonor(VidsealError, ValueError):
    """Insert/replace operations need a donor video."""


class DegenerateOutput(VidsealError, ValueError):
    """Resize scale collapses a dimension to zero."""


# --- evaluation ---

class EmptyEvaluation(VidsealError, ValueError):
    """No blocks were evaluated."""


class NoPositives(VidsealError, ValueError):
    """Average precision is not defined without positive labels."""


class EmptySweep(VidsealError, ValueError):
    """Threshold calibration needs a non-empty sweep."""
