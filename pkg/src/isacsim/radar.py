"""FFT range-Doppler processing: waveform compensation, oversampled 2D
transform, peak detection with sub-bin refinement and bin-to-physical
mapping.

Kernel orientation follows the OFDM-radar convention: an inverse DFT
across subcarriers turns the delay ramp exp(-j 2 pi l df tau) into a peak
at k = tau * df * K, and a forward DFT across symbols turns the Doppler
progression exp(+j 2 pi f_D T0 m) into a peak at l = f_D * T0 * L. Both
transforms are unitary, so map energy equals grid energy. The Doppler
axis is stored centered: negative velocities on the left half, DC at
column L/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from isacsim.config import SystemConfig
from isacsim.numerology import SPEED_OF_LIGHT


@dataclass(frozen=True)
class RangeDopplerMap:
    """Oversampled K x L power map with bin-to-physical axis metadata."""

    power: np.ndarray
    range_bin_m: float
    velocity_bin_mps: float
    doppler_dc_bin: int
    window: str

    @property
    def k_fft(self) -> int:
        return self.power.shape[0]

    @property
    def l_fft(self) -> int:
        return self.power.shape[1]

    @property
    def unambiguous_range_m(self) -> float:
        return self.range_bin_m * self.k_fft

    @property
    def velocity_span_mps(self) -> float:
        return self.velocity_bin_mps * self.l_fft


@dataclass(frozen=True)
class SensingEstimate:
    """Peak-derived range/velocity estimate with bin-level provenance."""

    range_m: float
    velocity_mps: float
    peak_power: float
    peak_bins: tuple[int, int]
    frac_bins: tuple[float, float]


def compensate(rx: np.ndarray, tx: np.ndarray) -> np.ndarray:
    """Divide the received grid by the known transmit symbols element-wise."""
    rx = np.asarray(rx)
    tx = np.asarray(tx)
    if rx.shape != tx.shape:
        raise ValueError(f"grid shapes differ: {rx.shape} vs {tx.shape}")
    return rx / tx


def _window_1d(name: str, length: int) -> np.ndarray:
    if name == "rect":
        return np.ones(length)
    if name == "hann":
        return np.hanning(length)
    raise ValueError(f"unknown window {name!r}")


def range_doppler_map(
    grid: np.ndarray,
    cfg: SystemConfig,
    k_fft: int | None = None,
    l_fft: int | None = None,
    window: str | None = None,
) -> RangeDopplerMap:
    """Compute the oversampled range-Doppler power map of a compensated grid.

    The optional separable window is applied before zero-padding. FFT sizes
    default to the configuration values and must be powers of two covering
    the grid.
    """
    grid = np.asarray(grid)
    n, m = grid.shape
    k = cfg.k_fft if k_fft is None else k_fft
    l = cfg.l_fft if l_fft is None else l_fft
    for size, need, axis in ((k, n, "range"), (l, m, "doppler")):
        if size < need or size & (size - 1):
            raise ValueError(f"{axis} FFT size {size} must be a power of two >= {need}")
    win = window if window is not None else cfg.window
    if win != "rect":
        grid = grid * _window_1d(win, n)[:, None] * _window_1d(win, m)[None, :]
    stage1 = np.fft.ifft(grid, n=k, axis=0) * np.sqrt(k)
    stage2 = np.fft.fft(stage1, n=l, axis=1) / np.sqrt(l)
    power = np.fft.fftshift(stage2.real**2 + stage2.imag**2, axes=1)
    t0 = cfg.symbol_period_s
    return RangeDopplerMap(
        power=power,
        range_bin_m=SPEED_OF_LIGHT / (2.0 * k * cfg.delta_f_hz),
        velocity_bin_mps=SPEED_OF_LIGHT / (2.0 * cfg.f_c_hz * l * t0),
        doppler_dc_bin=l // 2,
        window=win,
    )


def parabolic_peak_offset(a: float, b: float, c: float) -> float:
    """Vertex offset of the parabola through (-1, a), (0, b), (1, c).

    Returns (c - a) / (2 (2b - a - c)), clamped to [-0.5, 0.5]; degenerate
    neighborhoods (flat or non-concave) give 0.
    """
    den = 2.0 * (2.0 * b - a - c)
    if den <= 0 or not np.isfinite(den):
        return 0.0
    return float(np.clip((c - a) / den, -0.5, 0.5))


def _axis_offset(cut: np.ndarray, idx: int) -> float:
    """Sub-bin refinement along one axis, on dB-scaled power, circular ends."""
    n = cut.size
    left, mid, right = cut[(idx - 1) % n], cut[idx], cut[(idx + 1) % n]
    if left <= 0.0 or mid <= 0.0 or right <= 0.0:
        return 0.0
    db = 10.0 * np.log10([left, mid, right])
    return parabolic_peak_offset(db[0], db[1], db[2])


def detect_peak(rd_map: RangeDopplerMap) -> SensingEstimate:
    """Locate the global power maximum and refine it to fractional bins.

    Ties break toward the smaller range bin, then the smaller Doppler bin.
    The refined bins are converted to physical units using the map's axis
    metadata.
    """
    power = rd_map.power
    if power.size == 0:
        raise ValueError("empty map")
    k_star, l_star = np.unravel_index(int(np.argmax(power)), power.shape)
    dk = _axis_offset(power[:, l_star], k_star)
    dl = _axis_offset(power[k_star, :], l_star)
    range_m = (k_star + dk) * rd_map.range_bin_m
    velocity = (l_star + dl - rd_map.doppler_dc_bin) * rd_map.velocity_bin_mps
    return SensingEstimate(
        range_m=range_m,
        velocity_mps=velocity,
        peak_power=float(power[k_star, l_star]),
        peak_bins=(int(k_star), int(l_star)),
        frac_bins=(dk, dl),
    )


def bins_to_physical(
    k: float,
    l: float,
    cfg: SystemConfig,
    k_fft: int | None = None,
    l_fft: int | None = None,
) -> tuple[float, float]:
    """Map (possibly fractional) map bins to (range_m, velocity_mps).

    `l` is a centered Doppler column index: the DC bin sits at l_fft/2.
    """
    kf = cfg.k_fft if k_fft is None else k_fft
    lf = cfg.l_fft if l_fft is None else l_fft
    range_m = SPEED_OF_LIGHT * k / (2.0 * kf * cfg.delta_f_hz)
    velocity = SPEED_OF_LIGHT * (l - lf / 2) / (2.0 * cfg.f_c_hz * lf * cfg.symbol_period_s)
    return range_m, velocity
