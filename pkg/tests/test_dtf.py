import struct

import numpy as np
import pytest

from tenscomp.dtf import (
    MAGIC,
    DtfBadMagicError,
    DtfExtentError,
    DtfSizeMismatchError,
    DtfTruncatedError,
    load_tensor,
    parse_tensor,
    save_tensor,
    tensor_bytes,
)


def test_round_trip_order4(tmp_path):
    t = np.random.default_rng(0).standard_normal((3, 2, 4, 2))
    path = tmp_path / "t.dtf"
    save_tensor(t, path)
    assert np.array_equal(load_tensor(path), t)


def test_save_is_deterministic(tmp_path):
    t = np.random.default_rng(1).standard_normal((4, 5))
    p1, p2 = tmp_path / "a.dtf", tmp_path / "b.dtf"
    save_tensor(t, p1)
    save_tensor(t, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_zero_2x2_layout():
    raw = tensor_bytes(np.zeros((2, 2)))
    assert raw[:4] == MAGIC
    assert struct.unpack_from("<I", raw, 4)[0] == 2
    assert struct.unpack_from("<2Q", raw, 8) == (2, 2)
    header_len = 4 + 4 + 16
    assert raw[header_len:] == b"\x00" * 32


def test_payload_is_c_order_last_index_fastest():
    t = np.arange(6, dtype=float).reshape(2, 3)  # row-major values 0..5
    raw = tensor_bytes(t)
    payload = np.frombuffer(raw, dtype="<f8", offset=4 + 4 + 16)
    assert np.array_equal(payload, [0, 1, 2, 3, 4, 5])


def test_bad_magic_offset_zero():
    with pytest.raises(DtfBadMagicError) as err:
        parse_tensor(b"NOPE" + b"\x00" * 100)
    assert err.value.offset == 0


def test_truncated_payload(tmp_path):
    raw = tensor_bytes(np.ones((3, 3)))
    with pytest.raises(DtfTruncatedError) as err:
        parse_tensor(raw[:-8])
    assert err.value.offset == len(raw) - 8


def test_truncated_header():
    with pytest.raises(DtfTruncatedError):
        parse_tensor(MAGIC)
    with pytest.raises(DtfTruncatedError):
        parse_tensor(MAGIC + b"\x02\x00\x00\x00" + b"\x00" * 4)


def test_trailing_garbage_is_structural_error():
    raw = tensor_bytes(np.ones((2, 2))) + b"\x00" * 4
    with pytest.raises(DtfSizeMismatchError) as err:
        parse_tensor(raw)
    assert err.value.offset == len(raw) - 4


def test_zero_extent_rejected():
    raw = MAGIC + struct.pack("<I", 2) + struct.pack("<2Q", 2, 0)
    with pytest.raises(DtfExtentError) as err:
        parse_tensor(raw)
    assert err.value.offset == 8 + 8  # second extent field


def test_extent_overflow_rejected():
    raw = MAGIC + struct.pack("<I", 3) + struct.pack("<3Q", 2**40, 2**40, 2)
    with pytest.raises(DtfExtentError):
        parse_tensor(raw)


def test_order_out_of_range():
    raw = MAGIC + struct.pack("<I", 0)
    with pytest.raises(DtfExtentError):
        parse_tensor(raw)
    raw = MAGIC + struct.pack("<I", 9) + struct.pack("<9Q", *([1] * 9))
    with pytest.raises(DtfExtentError):
        parse_tensor(raw)


def test_mask_file_round_trip(tmp_path):
    from tenscomp.solver import generate_mask
    from tenscomp.validation import as_mask

    mask = generate_mask((5, 4, 3), 0.4, seed=9)
    path = tmp_path / "mask.dtf"
    save_tensor(mask.astype(float), path)
    assert np.array_equal(as_mask(load_tensor(path)), mask)
