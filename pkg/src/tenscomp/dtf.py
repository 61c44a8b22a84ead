"""DTF1 tensor container: a minimal self-describing binary format.

Layout (all integers little-endian):

    bytes 0..3    magic "DTF1"
    bytes 4..7    u32 N, the tensor order
    next 8*N      u64 extents I1..IN
    payload       8-byte IEEE-754 doubles in lexicographic index order,
                  last index varying fastest

Identical tensors always serialize to identical bytes.
"""

import struct

import numpy as np

from .validation import as_tensor

__all__ = [
    "MAGIC",
    "DtfFormatError",
    "DtfBadMagicError",
    "DtfTruncatedError",
    "DtfExtentError",
    "DtfSizeMismatchError",
    "save_tensor",
    "load_tensor",
]

MAGIC = b"DTF1"
MAX_ORDER = 8
# Total element cap so extent products cannot overflow or exhaust memory.
MAX_ELEMS = 2**40


class DtfFormatError(ValueError):
    """Malformed DTF1 data; ``offset`` is the failing byte position."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class DtfBadMagicError(DtfFormatError):
    pass


class DtfTruncatedError(DtfFormatError):
    pass


class DtfExtentError(DtfFormatError):
    pass


class DtfSizeMismatchError(DtfFormatError):
    pass


def tensor_bytes(t):
    """Canonical DTF1 encoding of a tensor."""
    t = as_tensor(t, "t", min_order=1, max_order=MAX_ORDER, require_finite=False)
    header = MAGIC + struct.pack("<I", t.ndim)
    header += struct.pack(f"<{t.ndim}Q", *t.shape)
    return header + np.ascontiguousarray(t, dtype="<f8").tobytes()


def save_tensor(t, path):
    """Write ``t`` to ``path`` in DTF1 form."""
    with open(path, "wb") as fh:
        fh.write(tensor_bytes(t))


def parse_tensor(raw):
    """Decode DTF1 bytes into a float64 ndarray."""
    if len(raw) < 4:
        raise DtfTruncatedError("file ends inside the magic", len(raw))
    if raw[:4] != MAGIC:
        raise DtfBadMagicError(f"bad magic {raw[:4]!r}, expected {MAGIC!r}", 0)
    if len(raw) < 8:
        raise DtfTruncatedError("file ends inside the order field", len(raw))
    (order,) = struct.unpack_from("<I", raw, 4)
    if not 1 <= order <= MAX_ORDER:
        raise DtfExtentError(f"order {order} outside [1, {MAX_ORDER}]", 4)
    extents_end = 8 + 8 * order
    if len(raw) < extents_end:
        raise DtfTruncatedError("file ends inside the extent list", len(raw))
    shape = struct.unpack_from(f"<{order}Q", raw, 8)
    total = 1
    for i, s in enumerate(shape):
        if s < 1:
            raise DtfExtentError(f"extent {i + 1} is zero", 8 + 8 * i)
        total *= s
        if total > MAX_ELEMS:
            raise DtfExtentError(
                f"extent product exceeds {MAX_ELEMS} elements", 8 + 8 * i
            )
    expected = extents_end + 8 * total
    if len(raw) < expected:
        raise DtfTruncatedError(
            f"payload ends early, expected {expected} bytes total", len(raw)
        )
    if len(raw) > expected:
        raise DtfSizeMismatchError(
            f"{len(raw) - expected} trailing bytes after declared payload", expected
        )
    data = np.frombuffer(raw, dtype="<f8", count=total, offset=extents_end)
    return data.reshape(shape).astype(np.float64)


def load_tensor(path):
    """Read a DTF1 file into a float64 ndarray."""
    with open(path, "rb") as fh:
        raw = fh.read()
    return parse_tensor(raw)
