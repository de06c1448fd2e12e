"""Estimation and Doppler-domain quality metrics: RMSE aggregation,
peak/integrated sidelobe ratios and closed-form accuracy bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from isacsim.channel import TargetScenario
from isacsim.config import SystemConfig
from isacsim.numerology import SPEED_OF_LIGHT
from isacsim.radar import SensingEstimate


@dataclass(frozen=True)
class SidelobeReport:
    """Sidelobe ratios of a 1-D power cut, mainlobe defined null-to-null."""

    pslr_db: float
    islr_db: float
    mainlobe_span_bins: tuple[int, int]


@dataclass(frozen=True)
class CrbPoint:
    """Lower-bound standard deviations for an unbiased range/velocity estimator."""

    snr_db: float
    sigma_range_m: float
    sigma_velocity_mps: float


def rmse(estimates: list[SensingEstimate], truth: TargetScenario) -> tuple[float, float]:
    """Root-mean-square range and velocity errors over a batch of trials."""
    if not estimates:
        raise ValueError("estimate list must not be empty")
    dr = np.array([e.range_m - truth.range_m for e in estimates])
    dv = np.array([e.velocity_mps - truth.velocity_mps for e in estimates])
    return float(np.sqrt(np.mean(dr**2))), float(np.sqrt(np.mean(dv**2)))


def _local_min_left(cut: np.ndarray, start: int) -> int:
    i = start
    while i > 0 and cut[i - 1] < cut[i]:
        i -= 1
    return i


def _local_min_right(cut: np.ndarray, start: int) -> int:
    i = start
    while i < cut.size - 1 and cut[i + 1] < cut[i]:
        i += 1
    return i


def sidelobe_metrics(cut: np.ndarray, peak_index: int) -> SidelobeReport:
    """Compute PSLR and ISLR of a power cut around its global peak.

    The mainlobe spans from the first local minimum left of the peak to
    the first local minimum right of it (null-to-null), truncated at the
    cut edges when the peak has no null on one side. PSLR is the largest
    sidelobe over the peak, ISLR the total sidelobe energy over the
    mainlobe energy; a cut without sidelobe power yields -inf for both.
    """
    cut = np.asarray(cut, dtype=float)
    if cut.size < 8:
        raise ValueError(f"cut must have at least 8 bins, got {cut.size}")
    if not 0 <= peak_index < cut.size:
        raise ValueError("peak index out of range")
    if cut[peak_index] < cut.max():
        raise ValueError("peak_index must be the global argmax of the cut")
    lo = _local_min_left(cut, peak_index)
    hi = _local_min_right(cut, peak_index)
    side = np.concatenate([cut[:lo], cut[hi + 1:]])
    main = cut[lo:hi + 1]
    peak = cut[peak_index]
    if side.size == 0 or side.max() <= 0.0 or peak <= 0.0:
        return SidelobeReport(float("-inf"), float("-inf"), (lo, hi))
    pslr = 10.0 * np.log10(side.max() / peak)
    islr = 10.0 * np.log10(side.sum() / main.sum())
    return SidelobeReport(float(pslr), float(islr), (lo, hi))


def crb(cfg: SystemConfig, snr_db: float) -> CrbPoint:
    """Accuracy bound for a single 2-D complex exponential in white noise.

    With per-element SNR gamma over an N x M grid:

        var(tau) = 6 / ((2 pi df)^2 gamma M N (N^2 - 1))
        var(f_D) = 6 / ((2 pi T0)^2 gamma N M (M^2 - 1))

    mapped to range/velocity via the two-way factors c/2 and c/(2 f_c).
    """
    n, m = cfg.n_subcarriers, cfg.m_symbols
    if n < 2 or m < 2:
        raise ValueError("bound requires at least 2 subcarriers and 2 symbols")
    gamma = 10.0 ** (snr_db / 10.0)
    var_tau = 6.0 / ((2.0 * np.pi * cfg.delta_f_hz) ** 2 * gamma * m * n * (n**2 - 1))
    var_fd = 6.0 / ((2.0 * np.pi * cfg.symbol_period_s) ** 2 * gamma * n * m * (m**2 - 1))
    return CrbPoint(
        snr_db=snr_db,
        sigma_range_m=SPEED_OF_LIGHT / 2.0 * np.sqrt(var_tau),
        sigma_velocity_mps=SPEED_OF_LIGHT / (2.0 * cfg.f_c_hz) * np.sqrt(var_fd),
    )
