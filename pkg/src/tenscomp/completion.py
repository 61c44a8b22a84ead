"""Scikit-learn style front end for the completion solvers."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .solver import SolverConfig, solve
from .validation import as_mask, as_tensor

__all__ = ["TensorCompleter"]


class TensorCompleter(TransformerMixin, BaseEstimator):
    """Impute missing tensor entries by low-rank completion with spectral
    MCP penalties.

    Works like an imputer: ``transform`` fills the unobserved entries of the
    tensor it is given. Missing entries are marked either by an explicit
    boolean ``mask`` (True = observed) or, when no mask is passed, by NaNs in
    the data. The computation is transductive, so ``fit`` already solves for
    its input and stores the result.

    Parameters
    ----------
    method : {"bemcp", "emcp", "nmcp"}
        Penalty adaptivity: both parameters per singular value, thresholds
        only, or none.
    alpha : sequence of float, optional
        Weights over unfolding pairs (lexicographic order); uniform if None.
    rho0, mu : float
        Initial ADMM penalty parameter and its growth factor.
    eps : float
        Convergence tolerance on the max entrywise change per iteration.
    max_iter : int
    gamma : float
        Initial penalty knot, > 1.
    lam : float, optional
        Initial penalty threshold; None means 0.1 * max absolute observed
        entry.
    aux_floor : float
        Floor for the adaptive auxiliary weights.

    Attributes
    ----------
    completion_ : ndarray
        Completed tensor for the data passed to ``fit``.
    n_iter_ : int
        Iterations used.
    trace_ : ConvergenceTrace
        Per-iteration convergence record.

    Examples
    --------
    >>> import numpy as np
    >>> from tenscomp import TensorCompleter
    >>> z = np.random.default_rng(0).standard_normal((6, 6, 4))
    >>> z[1, 2, 3] = np.nan
    >>> filled = TensorCompleter(max_iter=50).fit_transform(z)
    >>> bool(np.isfinite(filled).all())
    True
    """

    def __init__(
        self,
        method="bemcp",
        alpha=None,
        rho0=1e-3,
        mu=1.1,
        eps=1e-4,
        max_iter=500,
        gamma=35.0,
        lam=None,
        aux_floor=1e-10,
    ):
        self.method = method
        self.alpha = alpha
        self.rho0 = rho0
        self.mu = mu
        self.eps = eps
        self.max_iter = max_iter
        self.gamma = gamma
        self.lam = lam
        self.aux_floor = aux_floor

    def _config(self):
        return SolverConfig(
            method=self.method,
            alpha=None if self.alpha is None else tuple(self.alpha),
            rho0=self.rho0,
            mu=self.mu,
            eps=self.eps,
            max_iter=self.max_iter,
            gamma=self.gamma,
            lam=self.lam,
            aux_floor=self.aux_floor,
        )

    @staticmethod
    def _observed(X, mask):
        if mask is None:
            arr = np.asarray(X, dtype=np.float64)
            mask = ~np.isnan(arr)
            arr = np.where(mask, arr, 0.0)
        else:
            arr = np.asarray(X, dtype=np.float64)
            mask = as_mask(mask, arr.shape)
            arr = np.where(mask, arr, 0.0)
        return as_tensor(arr, "X", min_order=3), mask

    def fit(self, X, y=None, mask=None):
        """Solve the completion for ``X`` and store the result."""
        z, mask = self._observed(X, mask)
        self.completion_, self.trace_ = solve(z, mask, self._config())
        self.n_iter_ = len(self.trace_)
        return self

    def transform(self, X, mask=None):
        """Return the completed version of ``X`` (a fresh solve per call)."""
        z, mask = self._observed(X, mask)
        completed, _ = solve(z, mask, self._config())
        return completed

    def fit_transform(self, X, y=None, **fit_params):
        """Fit to ``X`` and return its completion without solving twice."""
        return self.fit(X, y, **fit_params).completion_
