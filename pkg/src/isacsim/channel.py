"""Monostatic point-target echo: delay ramp, Doppler progression,
differential oscillator phase noise and AWGN.

The noise-free echo of a target at range R moving at velocity v is

    y[l, m] = a * x[l, m] * exp(-j 2 pi l df tau) * exp(+j 2 pi f_D m T0)

with round-trip delay tau = 2R/c, two-way Doppler f_D = 2 v f_c / c and
full symbol period T0 = (N + N_cp) / f_s. Doppler phase accrues over the
physical symbol period (CP included) and the same T0 is used on the
processing side, keeping synthesis and analysis consistent.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from isacsim.config import SystemConfig
from isacsim.numerology import SPEED_OF_LIGHT
from isacsim.ofdm import TimeFrame
from isacsim.phase_noise import PhaseNoiseModel, PnSamplePath, symbol_cpe_weights, synthesize

PN_MODES = ("off", "cpe_differential", "per_sample")


class ModelValidityError(ValueError):
    """Scenario outside the regime where the grid-domain echo model holds."""


@dataclass(frozen=True)
class TargetScenario:
    """Single point target. Positive velocity closes on the radar.

    rcs_dbsm is carried as metadata only; it is not folded into a link
    budget, the echo strength is set directly by `amplitude`.
    """

    range_m: float = 5.0
    velocity_mps: float = 1.5
    amplitude: float = 1.0
    rcs_dbsm: float = -20.0

    def __post_init__(self):
        if self.range_m < 0:
            raise ValueError("target range must be non-negative")
        if self.amplitude < 0:
            # zero allowed: absent-echo dumps rely on it
            raise ValueError("target amplitude must be non-negative")

    @property
    def delay_s(self) -> float:
        """Round-trip delay 2R/c."""
        return 2.0 * self.range_m / SPEED_OF_LIGHT

    def doppler_hz(self, f_c_hz: float) -> float:
        """Two-way Doppler shift 2 v f_c / c."""
        return 2.0 * self.velocity_mps * f_c_hz / SPEED_OF_LIGHT


@dataclass(frozen=True)
class ChannelConfig:
    """Impairment configuration for one trial.

    snr_db is the per-element SNR of the received grid after the DFT;
    None (or +inf) disables noise.
    """

    snr_db: float | None = 30.0
    pn_mode: str = "off"
    pn_model: PhaseNoiseModel | None = None
    noise_seed: int = 0
    pn_seed: int = 0

    def __post_init__(self):
        if self.pn_mode not in PN_MODES:
            raise ValueError(f"pn_mode must be one of {PN_MODES}, got {self.pn_mode!r}")
        if self.pn_mode != "off" and self.pn_model is None:
            raise ValueError("pn_mode requires a phase-noise model")


def apply_target(tx: np.ndarray, scenario: TargetScenario, cfg: SystemConfig) -> np.ndarray:
    """Apply the noise-free, PN-free point-target echo to a transmit grid.

    Pure phase channel: per-element magnitudes are scaled by the target
    amplitude only. The delay acts as a frequency-domain phase ramp, exact
    for any in-CP fractional delay.
    """
    tx = np.asarray(tx)
    n, m = tx.shape
    tau = scenario.delay_s
    t0 = cfg.symbol_period_s
    if tau >= t0:
        raise ModelValidityError(
            f"round-trip delay {tau:.3e} s exceeds the symbol period {t0:.3e} s"
        )
    if tau >= cfg.n_cp / cfg.sample_rate_hz:
        warnings.warn(
            "round-trip delay exceeds the cyclic prefix; grid-domain echo "
            "model is no longer exact",
            stacklevel=2,
        )
    f_d = scenario.doppler_hz(cfg.f_c_hz)
    range_ramp = np.exp(-2j * np.pi * np.arange(n) * cfg.delta_f_hz * tau)
    doppler = np.exp(2j * np.pi * f_d * t0 * np.arange(m))
    return scenario.amplitude * tx * range_ramp[:, None] * doppler[None, :]


def pn_delay_samples(scenario: TargetScenario, cfg: SystemConfig) -> int:
    """Round-trip delay quantized to whole samples at f_s."""
    return int(round(scenario.delay_s * cfg.sample_rate_hz))


def apply_phase_noise(signal, scenario: TargetScenario, cfg: SystemConfig, channel_cfg: ChannelConfig):
    """Multiply a signal by the differential phase noise exp(j(phi[t-d]-phi[t])).

    "cpe_differential" takes a symbol grid and applies one weight per OFDM
    symbol, indexed at the symbol start; subcarriers of a symbol rotate
    together so no inter-carrier leakage appears. "per_sample" takes a
    time-domain frame and multiplies sample-wise, which breaks subcarrier
    orthogonality and produces genuine ICI after demodulation. The phase
    path is synthesized with `delay` extra samples so indexing never
    underflows.
    """
    mode = channel_cfg.pn_mode
    if mode == "off":
        raise ValueError("apply_phase_noise called with pn_mode='off'")
    d = pn_delay_samples(scenario, cfg)
    if mode == "cpe_differential":
        if not isinstance(signal, np.ndarray):
            raise ValueError("cpe_differential mode operates on a symbol grid")
        grid = signal
        m = grid.shape[1]
        stride = cfg.n_subcarriers + cfg.n_cp
        path = _pn_path(channel_cfg.pn_model, m * stride + d, cfg.sample_rate_hz, channel_cfg.pn_seed, d)
        w = symbol_cpe_weights(path, d, stride, d, m)
        return grid * w[None, :]
    if mode == "per_sample":
        if not isinstance(signal, TimeFrame):
            raise ValueError("per_sample mode operates on a time-domain frame")
        frame = signal
        num = frame.samples.size
        path = _pn_path(channel_cfg.pn_model, num + d, cfg.sample_rate_hz, channel_cfg.pn_seed, d)
        w = symbol_cpe_weights(path, d, 1, d, num)
        return TimeFrame(
            samples=frame.samples * w,
            sample_rate_hz=frame.sample_rate_hz,
            n_cp=frame.n_cp,
        )
    raise ValueError(f"unknown pn_mode {mode!r}")


def _pn_path(model: PhaseNoiseModel, length: int, fs: float, seed: int, delay: int) -> PnSamplePath:
    if delay == 0:
        # Differential weights collapse to unity; skip the synthesis.
        return PnSamplePath(phi=np.zeros(length), sample_rate_hz=fs)
    return synthesize(model, length, fs, seed)


def add_awgn(grid: np.ndarray, snr_db: float | None, seed: int) -> np.ndarray:
    """Add circular complex Gaussian noise at the given per-element SNR.

    The noise variance is mean(|grid|^2) / 10^(snr/10). A None or +inf
    SNR is the noise-off sentinel and returns the grid unchanged.
    """
    if snr_db is None or np.isinf(snr_db):
        return grid
    grid = np.asarray(grid)
    if grid.size == 0:
        raise ValueError("grid must be non-empty")
    rng = np.random.default_rng(seed)
    p_sig = np.mean(np.abs(grid) ** 2)
    sigma = np.sqrt(p_sig / 10.0 ** (snr_db / 10.0))
    noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return grid + noise * (sigma / np.sqrt(2.0))
