"""End-to-end experiment runner: load, mask, solve, score, emit artifacts."""

import csv
import dataclasses
import json
import math
import time
from dataclasses import dataclass, field

from .dtf import load_tensor, save_tensor
from .metrics import PSNR_CAP, evaluate
from .solver import SolverConfig, generate_mask, solve
from .tensor_ops import project_mask
from .validation import as_mask, check_same_shape

__all__ = ["ExperimentConfig", "CompletionReport", "run_experiment", "write_trace_csv"]

TRACE_HEADER = ("iter", "inf_norm_diff", "elapsed_s", "psnr")


@dataclass
class CompletionReport:
    """Run outcome: quality metrics (null without ground truth), effort, and
    the configuration echo. Serializes losslessly through JSON."""

    psnr: float | None
    ssim: float | None
    ergas: float | None
    rel_error: float | None
    iterations: int
    wall_time_s: float
    config: dict
    trace_path: str | None = None

    def to_json(self):
        return json.dumps(dataclasses.asdict(self), indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))


@dataclass
class ExperimentConfig:
    """One completion run: where the data lives, how to mask it, how to
    solve, and where the artifacts go.

    Exactly one mask source must be set: ``mask_path`` or ``rate`` (the mask
    seed is ``solver.seed``). With ``truth_path`` set, the observation is the
    masked ground truth and metrics are reported against it; otherwise the
    input is used as-is.
    """

    input_path: str
    out_path: str
    report_path: str
    truth_path: str | None = None
    mask_path: str | None = None
    rate: float | None = None
    trace_path: str | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if (self.mask_path is None) == (self.rate is None):
            raise ValueError("set exactly one mask source: mask_path or rate")
        if self.rate is not None and not 0.0 < self.rate <= 1.0:
            raise ValueError(f"sampling rate must lie in (0, 1], got {self.rate}")
        if isinstance(self.solver, dict):
            self.solver = SolverConfig(**self.solver)

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


def _cap(value):
    if value is None:
        return None
    if math.isinf(value):
        return PSNR_CAP if value > 0 else -PSNR_CAP
    return value


def write_trace_csv(trace, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for i in range(len(trace)):
            quality = trace.psnr[i]
            writer.writerow(
                (
                    i + 1,
                    repr(trace.step_inf_norm[i]),
                    repr(trace.elapsed_s[i]),
                    "" if quality is None else repr(_cap(quality)),
                )
            )


def run_experiment(cfg):
    """Execute one configured run and write its artifacts.

    Returns the :class:`CompletionReport` that was written to
    ``cfg.report_path``.
    """
    observed = load_tensor(cfg.input_path)
    truth = load_tensor(cfg.truth_path) if cfg.truth_path else None

    reference = truth if truth is not None else observed
    if cfg.mask_path is not None:
        mask = as_mask(load_tensor(cfg.mask_path), reference.shape, "mask")
    else:
        mask = generate_mask(reference.shape, cfg.rate, cfg.solver.seed)

    if truth is not None:
        check_same_shape(observed, truth, "input", "truth")
        z = project_mask(truth, mask)
    else:
        z = observed

    start = time.perf_counter()
    completed, trace = solve(z, mask, cfg.solver, truth=truth)
    wall = time.perf_counter() - start

    scores = evaluate(completed, truth) if truth is not None else None
    save_tensor(completed, cfg.out_path)
    if cfg.trace_path:
        write_trace_csv(trace, cfg.trace_path)

    report = CompletionReport(
        psnr=_cap(scores.psnr) if scores else None,
        ssim=scores.ssim if scores else None,
        ergas=scores.ergas if scores else None,
        rel_error=scores.rel_error if scores else None,
        iterations=len(trace),
        wall_time_s=wall,
        config=cfg.to_dict(),
        trace_path=cfg.trace_path,
    )
    with open(cfg.report_path, "w") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    return report
