"""Dense N-way tensor primitives.

Tensors are plain float64 ``numpy.ndarray`` values; complex tensors are
complex128; an observation set is a boolean array of the same shape
(True = observed). Mode pairs are 0-based here and everywhere in the
package; file formats and printed rank vectors use 1-based labels.

The mode-(k1, k2) unfolding rearranges an order-N tensor into a third-order
tensor whose frontal slices are the (k1, k2) two-mode sections, ordered
lexicographically with the earliest remaining mode varying fastest: entry
(i_1, ..., i_N) lands at (i_k1, i_k2, j) with

    j = sum over remaining modes s of i_s * J_s,
    J_s = product of extents of remaining modes before s,

which is Fortran-order flattening of the remaining modes.
"""

import numpy as np

from .validation import (
    as_complex_tensor,
    as_mask,
    as_tensor,
    check_mode_pair,
    check_order3,
    check_same_shape,
)

__all__ = [
    "frobenius_norm",
    "hadamard",
    "hadamard_div",
    "mode_pairs",
    "mode_unfold",
    "mode_fold",
    "dft_mode3",
    "idft_mode3",
    "project_mask",
    "inf_norm_diff",
]

# Conjugate-symmetry slack for idft_mode3, relative to the input magnitude.
IMAG_RESIDUE_RTOL = 1e-8


def frobenius_norm(t):
    """sqrt of the sum of squared entry moduli; accepts real or complex input."""
    arr = np.asarray(t)
    return float(np.linalg.norm(arr.ravel()))


def hadamard(a, b):
    """Elementwise product of two identically shaped tensors."""
    a = as_tensor(a, "a")
    b = as_tensor(b, "b")
    check_same_shape(a, b)
    return a * b


def hadamard_div(a, b):
    """Elementwise quotient a / b; every entry of b must be nonzero."""
    a = as_tensor(a, "a")
    b = as_tensor(b, "b")
    check_same_shape(a, b)
    zero = np.argwhere(b == 0.0)
    if zero.size:
        idx = tuple(int(v) for v in zero[0])
        raise ZeroDivisionError(f"divisor has zero entry at index {idx}")
    return a / b


def mode_pairs(order):
    """All 0-based mode pairs (k1, k2), k1 < k2, in lexicographic order."""
    return [(k1, k2) for k1 in range(order) for k2 in range(k1 + 1, order)]


def mode_unfold(t, k1, k2):
    """Unfold ``t`` into an I_k1 x I_k2 x (rest) third-order tensor.

    Parameters
    ----------
    t : ndarray
        Order-N input, N >= 2.
    k1, k2 : int
        0-based mode pair, k1 < k2.
    """
    t = np.asarray(t)
    check_mode_pair(t.ndim, k1, k2)
    rest = [s for s in range(t.ndim) if s not in (k1, k2)]
    moved = np.transpose(t, (k1, k2, *rest))
    # order='F' on the trailing block makes the first remaining mode fastest
    return moved.reshape(t.shape[k1], t.shape[k2], -1, order="F")


def mode_fold(u, k1, k2, shape):
    """Inverse of :func:`mode_unfold` for the given original ``shape``."""
    u = np.asarray(u)
    shape = tuple(int(s) for s in shape)
    check_mode_pair(len(shape), k1, k2)
    check_order3(u, "u")
    rest = [s for s in range(len(shape)) if s not in (k1, k2)]
    expect = (shape[k1], shape[k2], int(np.prod([shape[s] for s in rest], dtype=np.int64)))
    if u.shape != expect:
        raise ValueError(
            f"unfolding shape {u.shape} inconsistent with shape {shape} "
            f"and pair ({k1}, {k2}); expected {expect}"
        )
    cube = u.reshape([shape[k1], shape[k2]] + [shape[s] for s in rest], order="F")
    inverse = np.argsort((k1, k2, *rest))
    return np.transpose(cube, inverse)


def dft_mode3(t):
    """Unnormalized forward DFT along every mode-3 tube of an order-3 tensor."""
    t = np.asarray(t)
    check_order3(t, "t")
    return np.fft.fft(t, axis=2)


def idft_mode3(t):
    """Inverse DFT (1/I3 normalized) along mode 3, returning the real part.

    The input must be the transform of a real tensor; an imaginary residue
    above ``IMAG_RESIDUE_RTOL`` times the input Frobenius norm signals a
    conjugate-symmetry violation and raises ``ValueError``.
    """
    t = as_complex_tensor(t, "t", min_order=3, max_order=3)
    out = np.fft.ifft(t, axis=2)
    residue = float(np.linalg.norm(out.imag.ravel()))
    if residue > IMAG_RESIDUE_RTOL * max(frobenius_norm(t), 1e-300):
        raise ValueError(
            f"imaginary residue {residue:.3e} exceeds tolerance; "
            "input tubes are not conjugate-symmetric"
        )
    return out.real


def project_mask(t, mask):
    """Keep the observed entries of ``t`` and zero the rest."""
    t = np.asarray(t)
    mask = as_mask(mask, t.shape)
    return np.where(mask, t, 0.0)


def inf_norm_diff(a, b):
    """Max absolute entrywise difference between two tensors."""
    a = np.asarray(a)
    b = np.asarray(b)
    check_same_shape(a, b)
    return float(np.max(np.abs(a - b)))
