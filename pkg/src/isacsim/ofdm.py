"""OFDM symbol-grid generation and time-domain synthesis/analysis.

A symbol grid is a complex (N, M) ndarray: subcarrier index along axis 0,
symbol index along axis 1. Both DFT directions use the unitary 1/sqrt(N)
scaling, so modulate/demodulate are exact inverses and energy is preserved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Gray-coded 2-bit amplitude levels: adjacent codes differ in one bit.
_GRAY_LEVELS = np.array([-3.0, -1.0, 3.0, 1.0])
_QAM16_SCALE = 1.0 / np.sqrt(10.0)  # unit mean constellation power


@dataclass(frozen=True)
class TimeFrame:
    """Serial time-domain frame of M cyclic-prefixed OFDM symbols."""

    samples: np.ndarray
    sample_rate_hz: float
    n_cp: int

    def __post_init__(self):
        if self.samples.ndim != 1:
            raise ValueError("frame samples must be one-dimensional")
        if self.n_cp < 0:
            raise ValueError("cyclic prefix length must be non-negative")


def generate_qam16(n: int, m: int, seed: int) -> np.ndarray:
    """Draw an (n, m) grid of Gray-mapped 16-QAM symbols with unit mean power.

    Fully determined by seed; constellation points are (I + jQ)/sqrt(10)
    with I, Q in {-3, -1, 1, 3}.
    """
    if n <= 0 or m <= 0:
        raise ValueError("grid dimensions must be positive")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, 16, size=(n, m))
    return (_GRAY_LEVELS[idx >> 2] + 1j * _GRAY_LEVELS[idx & 3]) * _QAM16_SCALE


def qam16_constellation() -> np.ndarray:
    """The 16 constellation points, normalized to unit average power."""
    i = np.repeat(_GRAY_LEVELS, 4)
    q = np.tile(_GRAY_LEVELS, 4)
    return (i + 1j * q) * _QAM16_SCALE


def modulate(grid: np.ndarray, n_cp: int, sample_rate_hz: float = 0.0) -> TimeFrame:
    """Synthesize the serial time-domain frame for a symbol grid.

    Per symbol: unitary N-point inverse DFT of the subcarrier column,
    prefixed with its last n_cp samples; symbols are concatenated in order.
    """
    grid = np.asarray(grid)
    if grid.ndim != 2 or grid.shape[0] <= 0 or grid.shape[1] <= 0:
        raise ValueError("grid must be a 2-D (N, M) array")
    n = grid.shape[0]
    if not 0 <= n_cp <= n:
        raise ValueError(f"cyclic prefix length must be in [0, {n}], got {n_cp}")
    body = np.fft.ifft(grid, axis=0) * np.sqrt(n)
    with_cp = np.concatenate([body[n - n_cp:, :], body], axis=0)
    return TimeFrame(
        samples=with_cp.flatten(order="F"),
        sample_rate_hz=sample_rate_hz,
        n_cp=n_cp,
    )


def demodulate(frame: TimeFrame, n: int, m: int) -> np.ndarray:
    """Recover the (n, m) symbol grid from a serial frame.

    Strips each cyclic prefix and applies the unitary forward DFT; exact
    inverse of modulate in the absence of channel effects.
    """
    if n <= 0 or m <= 0:
        raise ValueError("grid dimensions must be positive")
    per_symbol = n + frame.n_cp
    if frame.samples.size != m * per_symbol:
        raise ValueError(
            f"frame length {frame.samples.size} does not match "
            f"M*(N+N_cp) = {m}*{per_symbol}"
        )
    symbols = frame.samples.reshape(per_symbol, m, order="F")
    return np.fft.fft(symbols[frame.n_cp:, :], axis=0) / np.sqrt(n)
