"""Reconstruction quality metrics: PSNR, SSIM, ERGAS, relative error.

Tensors are compared band by band, where a band is an I1 x I2 slice over
every combination of the trailing modes (the last mode for order-3 data;
channel x frame slices for order-4 video). Matrices count as a single band.
PSNR uses the per-band reference peak; SSIM is the single-scale index with
an 11 x 11 Gaussian window (sigma 1.5, K1 = 0.01, K2 = 0.03) and dynamic
range ``max(ref) - min(ref)``; ERGAS uses resolution ratio 1.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .validation import as_tensor, check_same_shape

__all__ = ["PSNR_CAP", "MetricReport", "psnr", "ssim", "ergas", "rel_error", "evaluate"]

# Value written to reports in place of an infinite PSNR (identical inputs).
PSNR_CAP = 999.0

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


@dataclass
class MetricReport:
    """Scalar metrics plus their per-band breakdowns."""

    psnr: float
    ssim: float
    ergas: float
    rel_error: float
    psnr_bands: list = field(default_factory=list)
    ssim_bands: list = field(default_factory=list)
    ergas_bands: list = field(default_factory=list)


def _as_bands(x, ref):
    x = as_tensor(x, "x", min_order=1)
    ref = as_tensor(ref, "ref", min_order=1)
    check_same_shape(x, ref, "x", "ref")
    if x.ndim <= 2:
        band_shape = x.shape if x.ndim == 2 else (1, x.size)
        return x.reshape(1, *band_shape), ref.reshape(1, *band_shape)
    flat_x = x.reshape(x.shape[0], x.shape[1], -1)
    flat_ref = ref.reshape(ref.shape[0], ref.shape[1], -1)
    return np.moveaxis(flat_x, 2, 0), np.moveaxis(flat_ref, 2, 0)


def psnr(x, ref, peak="band"):
    """Mean per-band peak signal-to-noise ratio in dB.

    ``peak`` selects the reference peak: "band" (default) uses each band's
    own maximum, "global" the maximum over the whole reference. A band with
    zero error contributes +inf; identical inputs therefore give +inf
    (capped to :data:`PSNR_CAP` in file output, not here).
    """
    if peak not in ("band", "global"):
        raise ValueError(f"peak must be 'band' or 'global', got {peak!r}")
    xb, rb = _as_bands(x, ref)
    global_peak = float(rb.max())
    values = []
    for b in range(xb.shape[0]):
        err = float(np.sum((xb[b] - rb[b]) ** 2))
        if err == 0.0:
            values.append(math.inf)
            continue
        top = global_peak if peak == "global" else float(rb[b].max())
        values.append(10.0 * math.log10(top**2 * xb[b].size / err))
    return float(np.mean(values))


def _gaussian_window():
    half = (SSIM_WINDOW - 1) / 2.0
    g = np.exp(-np.arange(-half, half + 1) ** 2 / (2.0 * SSIM_SIGMA**2))
    w = np.outer(g, g)
    return w / w.sum()


def _ssim_band(x, y, c1, c2):
    if min(x.shape) < SSIM_WINDOW:
        # window does not fit: fall back to global band statistics
        mx, my = x.mean(), y.mean()
        vx, vy = x.var(), y.var()
        cov = float(np.mean((x - mx) * (y - my)))
        return ((2 * mx * my + c1) * (2 * cov + c2)) / (
            (mx**2 + my**2 + c1) * (vx + vy + c2)
        )
    w = _gaussian_window()
    mx = fftconvolve(x, w, mode="valid")
    my = fftconvolve(y, w, mode="valid")
    vx = fftconvolve(x * x, w, mode="valid") - mx**2
    vy = fftconvolve(y * y, w, mode="valid") - my**2
    cov = fftconvolve(x * y, w, mode="valid") - mx * my
    num = (2 * mx * my + c1) * (2 * cov + c2)
    den = (mx**2 + my**2 + c1) * (vx + vy + c2)
    return float(np.mean(num / den))


def ssim(x, ref):
    """Mean per-band structural similarity index."""
    xb, rb = _as_bands(x, ref)
    dyn = float(rb.max() - rb.min())
    if dyn == 0.0:
        dyn = 1.0
    c1 = (SSIM_K1 * dyn) ** 2
    c2 = (SSIM_K2 * dyn) ** 2
    values = [_ssim_band(xb[b], rb[b], c1, c2) for b in range(xb.shape[0])]
    return float(np.mean(values))


def ergas(x, ref):
    """Dimensionless global relative error, 100 * rms of per-band
    normalized RMSE; zero-mean reference bands are excluded with a warning."""
    xb, rb = _as_bands(x, ref)
    ratios = []
    skipped = []
    for b in range(xb.shape[0]):
        mu = float(rb[b].mean())
        if mu == 0.0:
            skipped.append(b)
            continue
        mse = float(np.mean((xb[b] - rb[b]) ** 2))
        ratios.append(mse / mu**2)
    if skipped:
        warnings.warn(
            f"ergas: excluded zero-mean reference bands {skipped}", stacklevel=2
        )
    if not ratios:
        raise ValueError("ergas undefined: every reference band has zero mean")
    return 100.0 * math.sqrt(float(np.mean(ratios)))


def rel_error(x, ref):
    """Frobenius-norm relative error ||x - ref|| / ||ref||."""
    x = as_tensor(x, "x", min_order=1)
    ref = as_tensor(ref, "ref", min_order=1)
    check_same_shape(x, ref, "x", "ref")
    denom = float(np.linalg.norm(ref.ravel()))
    if denom == 0.0:
        raise ValueError("rel_error undefined for an all-zero reference")
    return float(np.linalg.norm((x - ref).ravel())) / denom


def evaluate(x, ref):
    """Compute all metrics at once, with per-band breakdowns."""
    xb, rb = _as_bands(x, ref)
    dyn = float(rb.max() - rb.min())
    if dyn == 0.0:
        dyn = 1.0
    c1 = (SSIM_K1 * dyn) ** 2
    c2 = (SSIM_K2 * dyn) ** 2

    psnr_bands = []
    ssim_bands = []
    ergas_bands = []
    for b in range(xb.shape[0]):
        err = float(np.sum((xb[b] - rb[b]) ** 2))
        if err == 0.0:
            psnr_bands.append(math.inf)
        else:
            peak = float(rb[b].max())
            psnr_bands.append(10.0 * math.log10(peak**2 * xb[b].size / err))
        ssim_bands.append(_ssim_band(xb[b], rb[b], c1, c2))
        mu = float(rb[b].mean())
        ergas_bands.append(
            math.nan if mu == 0.0 else float(np.mean((xb[b] - rb[b]) ** 2)) / mu**2
        )

    finite_ergas = [v for v in ergas_bands if not math.isnan(v)]
    return MetricReport(
        psnr=float(np.mean(psnr_bands)),
        ssim=float(np.mean(ssim_bands)),
        ergas=100.0 * math.sqrt(float(np.mean(finite_ergas))) if finite_ergas else math.nan,
        rel_error=rel_error(x, ref),
        psnr_bands=psnr_bands,
        ssim_bands=ssim_bands,
        ergas_bands=ergas_bands,
    )
