"""System-level waveform and processing configuration."""

from __future__ import annotations

from dataclasses import dataclass

from isacsim.numerology import subcarrier_spacing


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SystemConfig:
    """Carrier, numerology, grid dimensions and FFT sizes of one setup.

    Defaults describe the reference configuration: 130 GHz carrier,
    mu=5 (480 kHz spacing), 256 subcarriers, 64 symbols, CP of 64 samples
    and 2048-point processing FFTs on both axes.
    """

    f_c_hz: float = 130e9
    mu: int = 5
    n_subcarriers: int = 256
    m_symbols: int = 64
    n_cp: int = 64
    k_fft: int = 2048
    l_fft: int = 2048
    window: str = "rect"

    def __post_init__(self):
        if self.f_c_hz <= 0:
            raise ValueError("carrier frequency must be positive")
        subcarrier_spacing(self.mu)  # validates mu range
        if self.n_subcarriers <= 0 or self.m_symbols <= 0:
            raise ValueError("grid dimensions must be positive")
        if not 0 <= self.n_cp <= self.n_subcarriers:
            raise ValueError(f"cyclic prefix length must be in [0, N], got {self.n_cp}")
        if not (_is_pow2(self.k_fft) and _is_pow2(self.l_fft)):
            raise ValueError("processing FFT sizes must be powers of two")
        if self.k_fft < self.n_subcarriers or self.l_fft < self.m_symbols:
            raise ValueError("processing FFT sizes must cover the symbol grid")
        if self.window not in ("rect", "hann"):
            raise ValueError(f"unknown window {self.window!r}")

    @property
    def delta_f_hz(self) -> float:
        return subcarrier_spacing(self.mu)

    @property
    def sample_rate_hz(self) -> float:
        """System sampling rate N * df."""
        return self.n_subcarriers * self.delta_f_hz

    @property
    def symbol_period_s(self) -> float:
        """Full OFDM symbol period (N + N_cp) / f_s, CP included."""
        return (self.n_subcarriers + self.n_cp) / self.sample_rate_hz

    @property
    def frame_samples(self) -> int:
        return self.m_symbols * (self.n_subcarriers + self.n_cp)
