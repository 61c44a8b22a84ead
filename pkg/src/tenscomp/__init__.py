"""Low-rank tensor completion with adaptive minimax-concave spectral penalties."""

import os as _os

# Honor the thread cap before any BLAS pool spins up; explicit user settings win.
_cap = _os.environ.get("TENSCOMP_THREADS")
if _cap and _cap.isdigit():
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _cap)
del _os, _cap

from .completion import TensorCompleter
from .dtf import load_tensor, save_tensor
from .experiment import CompletionReport, ExperimentConfig, run_experiment
from .metrics import MetricReport, ergas, evaluate, psnr, rel_error, ssim
from .penalty import (
    McpParams,
    PenaltyParamGrid,
    mcp_prox,
    mcp_value,
    mcp_variational_minimizer,
    mcp_variational_objective,
    shrink_singular_values,
    spectral_mcp,
    spectral_mcp_prox,
    weighted_tnn,
)
from .solver import ConvergenceTrace, SolverConfig, generate_mask, solve
from .synthetic import low_tubal_rank
from .tensor_ops import (
    dft_mode3,
    frobenius_norm,
    hadamard,
    hadamard_div,
    idft_mode3,
    inf_norm_diff,
    mode_fold,
    mode_pairs,
    mode_unfold,
    project_mask,
)
from .tsvd import (
    TSvdFactors,
    conj_transpose,
    identity_tensor,
    multi_rank,
    n_tubal_rank,
    singular_spectrum,
    t_product,
    t_svd,
    tnn,
    tubal_rank,
)

__version__ = "0.1.0"

__all__ = [
    "TensorCompleter",
    "load_tensor",
    "save_tensor",
    "CompletionReport",
    "ExperimentConfig",
    "run_experiment",
    "MetricReport",
    "ergas",
    "evaluate",
    "psnr",
    "rel_error",
    "ssim",
    "McpParams",
    "PenaltyParamGrid",
    "mcp_prox",
    "mcp_value",
    "mcp_variational_minimizer",
    "mcp_variational_objective",
    "shrink_singular_values",
    "spectral_mcp",
    "spectral_mcp_prox",
    "weighted_tnn",
    "ConvergenceTrace",
    "SolverConfig",
    "generate_mask",
    "solve",
    "low_tubal_rank",
    "dft_mode3",
    "frobenius_norm",
    "hadamard",
    "hadamard_div",
    "idft_mode3",
    "inf_norm_diff",
    "mode_fold",
    "mode_pairs",
    "mode_unfold",
    "project_mask",
    "TSvdFactors",
    "conj_transpose",
    "identity_tensor",
    "multi_rank",
    "n_tubal_rank",
    "singular_spectrum",
    "t_product",
    "t_svd",
    "tnn",
    "tubal_rank",
    "__version__",
]
