"""Input validation helpers shared across the package.

All public entry points funnel array-likes through these functions so that
shape and dtype errors surface with a readable message instead of a numpy
broadcasting surprise deep inside a solver iteration.
"""

import numpy as np

__all__ = [
    "as_tensor",
    "as_complex_tensor",
    "as_mask",
    "as_param_grid",
    "check_same_shape",
    "check_order3",
    "check_mode_pair",
]


def as_tensor(x, name="x", min_order=1, max_order=8, require_finite=True):
    """Coerce ``x`` to a float64 ndarray and validate its order.

    Parameters
    ----------
    x : array_like
        Real-valued N-way data.
    name : str
        Argument name used in error messages.
    min_order, max_order : int
        Inclusive bounds on the number of modes.
    require_finite : bool
        Reject NaN/Inf entries when True.

    Returns
    -------
    ndarray of float64
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim < min_order or arr.ndim > max_order:
        raise ValueError(
            f"{name} must have between {min_order} and {max_order} modes, "
            f"got order {arr.ndim}"
        )
    if arr.size == 0:
        raise ValueError(f"{name} must have all extents >= 1, got shape {arr.shape}")
    if require_finite and not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_complex_tensor(x, name="x", min_order=1, max_order=8):
    """Coerce ``x`` to a complex128 ndarray and validate its order."""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim < min_order or arr.ndim > max_order:
        raise ValueError(
            f"{name} must have between {min_order} and {max_order} modes, "
            f"got order {arr.ndim}"
        )
    if arr.size == 0:
        raise ValueError(f"{name} must have all extents >= 1, got shape {arr.shape}")
    return arr


def as_mask(m, shape=None, name="mask"):
    """Coerce ``m`` to a boolean observation mask.

    Accepts boolean arrays or numeric arrays whose entries are exactly 0/1.
    """
    arr = np.asarray(m)
    if arr.dtype != np.bool_:
        num = np.asarray(arr, dtype=np.float64)
        if not np.isin(num, (0.0, 1.0)).all():
            raise ValueError(f"{name} entries must be boolean or exactly 0/1")
        arr = num.astype(bool)
    if shape is not None and arr.shape != tuple(shape):
        raise ValueError(f"{name} has shape {arr.shape}, expected {tuple(shape)}")
    return arr


def as_param_grid(grid, shape, name, lower=None, lower_strict=False):
    """Validate an (I3, R) parameter matrix with an elementwise lower bound."""
    arr = np.asarray(grid, dtype=np.float64)
    if arr.shape != tuple(shape):
        raise ValueError(f"{name} has shape {arr.shape}, expected {tuple(shape)}")
    if lower is not None:
        ok = (arr > lower) if lower_strict else (arr >= lower)
        if not ok.all():
            op = ">" if lower_strict else ">="
            raise ValueError(f"{name} must be {op} {lower} elementwise")
    return arr


def check_same_shape(a, b, name_a="a", name_b="b"):
    if a.shape != b.shape:
        raise ValueError(
            f"{name_a} and {name_b} must have identical shapes, "
            f"got {a.shape} vs {b.shape}"
        )


def check_order3(t, name="t"):
    if t.ndim != 3:
        raise ValueError(f"{name} must be a third-order tensor, got order {t.ndim}")


def check_mode_pair(order, k1, k2):
    """Validate a 0-based mode pair ``k1 < k2`` against tensor order."""
    if not (0 <= k1 < k2 < order):
        raise ValueError(
            f"mode pair ({k1}, {k2}) invalid for an order-{order} tensor; "
            "need 0 <= k1 < k2 < order"
        )
