"""Third-order tensor algebra in the Fourier domain.

The tensor-tensor product, conjugate transpose, and tensor SVD all reduce to
ordinary matrix operations on the frontal slices of the mode-3 DFT. For real
input the transformed slices are conjugate-symmetric, so only the first
``n3 // 2 + 1`` slices are factored and the rest are mirrored; this halves the
work and makes the spatial-domain factors exactly real.
"""

from dataclasses import dataclass, field

import numpy as np

from ._threads import map_indices
from .tensor_ops import mode_pairs, mode_unfold
from .validation import as_tensor, check_order3

__all__ = [
    "TSvdFactors",
    "identity_tensor",
    "t_product",
    "conj_transpose",
    "t_svd",
    "singular_spectrum",
    "tubal_rank",
    "multi_rank",
    "tnn",
    "n_tubal_rank",
]

# A singular value counts as nonzero when it exceeds this fraction of the
# largest singular value across all Fourier slices.
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class TSvdFactors:
    """Factors of a tensor SVD ``y = u * s * conj_transpose(v)``.

    Attributes
    ----------
    u : ndarray, I1 x I1 x I3
        Orthogonal tensor of left singular tubes (real, spatial domain).
    s : ndarray, I1 x I2 x I3
        f-diagonal core (every frontal slice diagonal).
    v : ndarray, I2 x I2 x I3
        Orthogonal tensor of right singular tubes.
    spectrum : ndarray, I3 x R
        Row i holds the singular values of Fourier slice i, nonincreasing;
        R = min(I1, I2).
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray
    spectrum: np.ndarray = field(repr=False)

    def reconstruct(self):
        """Multiply the factors back together."""
        return t_product(t_product(self.u, self.s), conj_transpose(self.v))


def identity_tensor(n, n3):
    """n x n x n3 tensor whose first frontal slice is I and the rest zero."""
    out = np.zeros((n, n, n3))
    out[:, :, 0] = np.eye(n)
    return out


def t_product(a, b):
    """Tensor-tensor product of a (I1 x I2 x I3) with b (I2 x J x I3).

    Equals the block-circulant matrix of ``a`` applied to the block
    vectorization of ``b``; computed as slice-wise matrix products in the
    Fourier domain.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    check_order3(a, "a")
    check_order3(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"inner dimensions differ: {a.shape} * {b.shape}")
    if a.shape[2] != b.shape[2]:
        raise ValueError(f"mode-3 extents differ: {a.shape[2]} vs {b.shape[2]}")
    a_hat = np.fft.fft(a, axis=2)
    b_hat = np.fft.fft(b, axis=2)
    c_hat = np.matmul(a_hat.transpose(2, 0, 1), b_hat.transpose(2, 0, 1))
    c = np.fft.ifft(c_hat.transpose(1, 2, 0), axis=2)
    if np.isrealobj(a) and np.isrealobj(b):
        return c.real
    return c


def conj_transpose(a):
    """Conjugate-transpose each frontal slice and reverse slices 2..I3."""
    a = np.asarray(a)
    check_order3(a, "a")
    flipped = np.concatenate([a[:, :, :1], a[:, :, -1:0:-1]], axis=2)
    return flipped.conj().transpose(1, 0, 2)


def _fourier_slices(y):
    """DFT slices of a real order-3 tensor plus the mirrored-slice count."""
    y_hat = np.fft.fft(y, axis=2)
    n3 = y.shape[2]
    return y_hat, n3 // 2 + 1


def t_svd(y):
    """Tensor SVD of a real third-order tensor.

    Returns
    -------
    TSvdFactors
        Full (square u and v) factorization with the per-slice singular
        values cached in ``spectrum``.

    Raises
    ------
    numpy.linalg.LinAlgError
        If the SVD of some Fourier slice fails to converge; the message
        carries the slice index.
    """
    y = as_tensor(y, "y", min_order=3, max_order=3)
    i1, i2, n3 = y.shape
    r = min(i1, i2)
    y_hat, n_half = _fourier_slices(y)

    u_hat = np.empty((i1, i1, n3), dtype=np.complex128)
    s_hat = np.zeros((i1, i2, n3), dtype=np.complex128)
    v_hat = np.empty((i2, i2, n3), dtype=np.complex128)
    spectrum = np.empty((n3, r))

    def factor(i):
        try:
            u, sig, vh = np.linalg.svd(y_hat[:, :, i], full_matrices=True)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(
                f"SVD failed on Fourier slice {i}: {exc}"
            ) from exc
        u_hat[:, :, i] = u
        s_hat[:r, :r, i] = np.diag(sig)
        v_hat[:, :, i] = vh.conj().T
        spectrum[i] = sig

    map_indices(factor, n_half)
    for i in range(n_half, n3):
        u_hat[:, :, i] = u_hat[:, :, n3 - i].conj()
        s_hat[:, :, i] = s_hat[:, :, n3 - i]
        v_hat[:, :, i] = v_hat[:, :, n3 - i].conj()
        spectrum[i] = spectrum[n3 - i]

    u = np.fft.ifft(u_hat, axis=2).real
    s = np.fft.ifft(s_hat, axis=2).real
    v = np.fft.ifft(v_hat, axis=2).real
    return TSvdFactors(u=u, s=s, v=v, spectrum=spectrum)


def singular_spectrum(y):
    """I3 x R matrix of per-Fourier-slice singular values, rows nonincreasing."""
    y = as_tensor(y, "y", min_order=3, max_order=3)
    i1, i2, n3 = y.shape
    r = min(i1, i2)
    y_hat, n_half = _fourier_slices(y)
    spectrum = np.empty((n3, r))

    def factor(i):
        spectrum[i] = np.linalg.svd(y_hat[:, :, i], compute_uv=False)

    map_indices(factor, n_half)
    for i in range(n_half, n3):
        spectrum[i] = spectrum[n3 - i]
    return spectrum


def _rank_tolerance(spectrum):
    return RANK_RTOL * float(spectrum.max(initial=0.0))


def tubal_rank(y):
    """Number of nonzero singular tubes of the tensor SVD core."""
    spectrum = singular_spectrum(y)
    return int(np.count_nonzero(spectrum.max(axis=0) > _rank_tolerance(spectrum)))


def multi_rank(y):
    """Vector of Fourier-slice matrix ranks (length I3)."""
    spectrum = singular_spectrum(y)
    return np.count_nonzero(spectrum > _rank_tolerance(spectrum), axis=1)


def tnn(y):
    """Tensor nuclear norm: plain sum of all Fourier-slice singular values."""
    return float(singular_spectrum(y).sum())


def n_tubal_rank(y):
    """Tubal ranks of all mode-(k1, k2) unfoldings, lexicographic pair order.

    For an order-N input (N >= 3) the result has length N(N-1)/2.
    """
    y = as_tensor(y, "y", min_order=3)
    return np.array([tubal_rank(mode_unfold(y, k1, k2)) for k1, k2 in mode_pairs(y.ndim)])
