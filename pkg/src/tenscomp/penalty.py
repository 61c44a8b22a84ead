"""Minimax-concave penalty (MCP) family and its proximal operators.

The scalar penalty with threshold ``lam >= 0`` and concavity knot
``gamma > 1`` is

    h(y) = lam*|y| - y^2/(2*gamma)   for |y| <= gamma*lam,
           gamma*lam^2/2             otherwise,

continuous at the knot. It admits an exact variational rewriting as a
minimum over an auxiliary weight ``aux >= 0``,

    h(y) = min_aux (2*aux*|y| + (aux - lam*gamma)^2) / (2*gamma),

which is what lets both parameters be promoted to per-singular-value
variables inside a solver. Applying the penalty to the singular values of
every Fourier slice of a third-order tensor gives the spectral penalty
:func:`spectral_mcp`; its proximal operator shrinks each singular value by
the firm-thresholding rule and reconstructs.
"""

from dataclasses import dataclass

import numpy as np

from ._threads import map_indices
from .tsvd import singular_spectrum
from .validation import as_param_grid, as_tensor

__all__ = [
    "GAMMA_MIN",
    "McpParams",
    "PenaltyParamGrid",
    "mcp_value",
    "mcp_variational_objective",
    "mcp_variational_minimizer",
    "mcp_prox",
    "shrink_singular_values",
    "spectral_mcp",
    "weighted_tnn",
    "spectral_mcp_prox",
]

# gamma -> 1+ makes the firm-threshold slope gamma/(gamma-1) diverge;
# reject anything this close to 1 at construction.
GAMMA_MIN = 1.0 + 1e-9


def _check_scalar_params(lam, gamma):
    lam = np.asarray(lam, dtype=np.float64)
    gamma = np.asarray(gamma, dtype=np.float64)
    if np.any(lam < 0):
        raise ValueError("lam must be >= 0")
    if np.any(gamma < GAMMA_MIN):
        raise ValueError(f"gamma must be > 1 (at least {GAMMA_MIN})")
    return lam, gamma


@dataclass(frozen=True)
class McpParams:
    """Scalar MCP parameters: threshold ``lam >= 0``, knot ``gamma > 1``."""

    lam: float
    gamma: float

    def __post_init__(self):
        _check_scalar_params(self.lam, self.gamma)


@dataclass
class PenaltyParamGrid:
    """Per-singular-value penalty parameters for one unfolding.

    All three matrices are I3 x R, where R = min(I1, I2) of the unfolding:
    ``lam`` (>= 0) and ``gamma`` (> 1) parameterize the penalty applied to
    the j-th largest singular value of Fourier slice i; ``aux`` (>= 0) holds
    the auxiliary weights of the variational form.
    """

    lam: np.ndarray
    gamma: np.ndarray
    aux: np.ndarray

    def __post_init__(self):
        shape = np.asarray(self.lam).shape
        self.lam = as_param_grid(self.lam, shape, "lam", lower=0.0)
        self.gamma = as_param_grid(self.gamma, shape, "gamma", lower=GAMMA_MIN)
        self.aux = as_param_grid(self.aux, shape, "aux", lower=0.0)

    @classmethod
    def uniform(cls, n_slices, r, lam, gamma):
        """Constant grids with ``aux = lam * gamma`` (its zero-signal value)."""
        shape = (n_slices, r)
        return cls(
            lam=np.full(shape, float(lam)),
            gamma=np.full(shape, float(gamma)),
            aux=np.full(shape, float(lam) * float(gamma)),
        )


def mcp_value(y, lam, gamma):
    """Evaluate the MCP penalty; broadcasts over ``y``, ``lam``, ``gamma``."""
    lam, gamma = _check_scalar_params(lam, gamma)
    a = np.abs(np.asarray(y, dtype=np.float64))
    plateau = gamma * lam**2 / 2.0
    ramp = lam * a - a**2 / (2.0 * gamma)
    out = np.where(a >= gamma * lam, plateau, ramp)
    return out if out.ndim else float(out)


def mcp_variational_objective(y, aux, lam, gamma):
    """Inner objective of the variational MCP form at auxiliary weight ``aux``."""
    lam, gamma = _check_scalar_params(lam, gamma)
    aux = np.asarray(aux, dtype=np.float64)
    if np.any(aux < 0):
        raise ValueError("aux must be >= 0")
    y = np.asarray(y, dtype=np.float64)
    out = (2.0 * aux * np.abs(y) + (aux - lam * gamma) ** 2) / (2.0 * gamma)
    return out if out.ndim else float(out)


def mcp_variational_minimizer(y, lam, gamma):
    """Auxiliary weight minimizing the variational objective.

    Equals ``lam*gamma - |y|`` while ``|y| <= gamma*lam`` and 0 beyond; the
    objective evaluated there recovers :func:`mcp_value` exactly.
    """
    lam, gamma = _check_scalar_params(lam, gamma)
    out = np.maximum(lam * gamma - np.abs(np.asarray(y, dtype=np.float64)), 0.0)
    return out if out.ndim else float(out)


def mcp_prox(y, lam, gamma):
    """Proximal operator of the MCP penalty (firm thresholding).

    Zero on ``[-lam, lam]``, the expansion ``gamma*(|y|-lam)/(gamma-1)`` in
    the middle region, identity beyond ``gamma*lam``. Odd in ``y``;
    broadcasts over all arguments.
    """
    lam, gamma = _check_scalar_params(lam, gamma)
    y = np.asarray(y, dtype=np.float64)
    a = np.abs(y)
    mag = np.minimum(a, np.maximum(gamma * (a - lam) / (gamma - 1.0), 0.0))
    out = mag * np.sign(y)
    return out if out.ndim else float(out)


def shrink_singular_values(sigma, lam, gamma):
    """Firm-threshold rule restricted to nonnegative singular values."""
    lam, gamma = _check_scalar_params(lam, gamma)
    sigma = np.asarray(sigma, dtype=np.float64)
    if np.any(sigma < 0):
        raise ValueError("singular values must be >= 0")
    out = np.minimum(sigma, np.maximum(gamma * (sigma - lam) / (gamma - 1.0), 0.0))
    return out if out.ndim else float(out)


def _check_grids(y, lam, gamma):
    n3 = y.shape[2]
    r = min(y.shape[0], y.shape[1])
    lam = as_param_grid(lam, (n3, r), "lam", lower=0.0)
    gamma = as_param_grid(gamma, (n3, r), "gamma", lower=GAMMA_MIN)
    return lam, gamma


def spectral_mcp(y, lam, gamma):
    """MCP penalty summed over all Fourier-slice singular values of ``y``.

    ``lam`` and ``gamma`` are I3 x R matrices; entry (i, j) parameterizes the
    penalty on the j-th largest singular value of Fourier slice i.
    """
    y = as_tensor(y, "y", min_order=3, max_order=3)
    lam, gamma = _check_grids(y, lam, gamma)
    return float(np.sum(mcp_value(singular_spectrum(y), lam, gamma)))


def weighted_tnn(spectrum, weights):
    """Weighted tensor nuclear norm: elementwise-weighted spectrum sum."""
    spectrum = np.asarray(spectrum, dtype=np.float64)
    weights = as_param_grid(weights, spectrum.shape, "weights", lower=0.0)
    return float(np.sum(spectrum * weights))


def _spectral_prox_with_spectrum(y, lam, gamma):
    """Shrink the singular spectrum of ``y`` and reconstruct.

    Returns the real reconstruction together with its (sorted, nonincreasing)
    singular spectrum. Fourier slices past ``n3 // 2`` are conjugate mirrors
    of their partners and reuse the partner's parameter rows; grids produced
    by the solvers are mirror-symmetric, so this is exact for them.
    """
    i1, i2, n3 = y.shape
    y_hat = np.fft.fft(y, axis=2)
    n_half = n3 // 2 + 1
    l_hat = np.empty_like(y_hat)
    shrunk = np.empty((n3, min(i1, i2)))

    def shrink_slice(i):
        u, sig, vh = np.linalg.svd(y_hat[:, :, i], full_matrices=False)
        s1 = np.minimum(sig, np.maximum(gamma[i] * (sig - lam[i]) / (gamma[i] - 1.0), 0.0))
        l_hat[:, :, i] = (u * s1) @ vh
        shrunk[i] = s1

    map_indices(shrink_slice, n_half)
    for i in range(n_half, n3):
        l_hat[:, :, i] = l_hat[:, :, n3 - i].conj()
        shrunk[i] = shrunk[n3 - i]

    out = np.fft.ifft(l_hat, axis=2).real
    spectrum = -np.sort(-shrunk, axis=1)
    return out, spectrum


def spectral_mcp_prox(y, lam, gamma):
    """Proximal operator of :func:`spectral_mcp`.

    Takes the tensor SVD of ``y``, applies :func:`shrink_singular_values`
    elementwise to the I3 x R spectrum with the matching parameter entries,
    and multiplies the factors back; output is real.
    """
    y = as_tensor(y, "y", min_order=3, max_order=3)
    lam, gamma = _check_grids(y, lam, gamma)
    out, _ = _spectral_prox_with_spectrum(y, lam, gamma)
    return out
