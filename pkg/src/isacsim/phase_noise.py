"""Oscillator phase-noise PSD profiles, sample-path synthesis and
differential per-symbol weights.

A profile is a near-carrier plateau shaped by multiplicative poles plus a
white floor:

    S(f) = S_ref * prod_k (1 + (f/f_k)^a_k)^-1 + S_white      [rad^2/Hz]

dBc/Hz levels are mapped to the one-sided PSD of the phase process via
10^(L/10) with no additional single-sideband factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PhaseNoiseModel:
    """Pole/floor description of a one-sided phase-noise PSD."""

    name: str
    ref_level_dbc: float
    white_floor_dbc: float
    poles: tuple[tuple[float, int], ...]

    def __post_init__(self):
        if self.ref_level_dbc <= self.white_floor_dbc:
            raise ValueError("reference level must sit above the white floor")
        corners = [c for c, _ in self.poles]
        if any(c <= 0 for c in corners):
            raise ValueError("pole corners must be positive")
        if corners != sorted(corners) or len(set(corners)) != len(corners):
            raise ValueError("pole corners must be strictly increasing")
        if any(order < 1 for _, order in self.poles):
            raise ValueError("pole orders must be >= 1")


@dataclass(frozen=True)
class PnSamplePath:
    """Synthesized discrete-time phase trajectory, radians, unwrapped."""

    phi: np.ndarray
    sample_rate_hz: float


_PRESETS = {
    "tuned_130ghz": PhaseNoiseModel(
        name="tuned_130ghz",
        ref_level_dbc=-70.0,
        white_floor_dbc=-150.0,
        poles=((1.1e4, 1), (1.1e7, 2)),
    ),
    "tgpp_70ghz": PhaseNoiseModel(
        name="tgpp_70ghz",
        ref_level_dbc=-39.5,
        white_floor_dbc=-111.0,
        poles=((3.1e3, 1), (3.96e5, 1), (7.54e8, 1)),
    ),
}


def builtin_model(which: str) -> PhaseNoiseModel:
    """Return one of the built-in oscillator profiles.

    "tuned_130ghz" is a D-band oscillator fit; "tgpp_70ghz" is the standard
    mmWave reference profile.
    """
    try:
        return _PRESETS[which]
    except KeyError:
        raise ValueError(f"unknown phase-noise preset {which!r}; " f"choose from {sorted(_PRESETS)}") from None


def psd_eval(model: PhaseNoiseModel, f_hz):
    """Evaluate the one-sided PSD in dBc/Hz at offset f_hz (scalar or array)."""
    f = np.asarray(f_hz, dtype=float)
    if np.any(f <= 0):
        raise ValueError("offset frequency must be positive")
    s = np.full(f.shape, 10.0 ** (model.ref_level_dbc / 10.0))
    for corner, order in model.poles:
        s = s / (1.0 + (f / corner) ** order)
    s = s + 10.0 ** (model.white_floor_dbc / 10.0)
    out = 10.0 * np.log10(s)
    return float(out) if np.isscalar(f_hz) else out


def psd_linear(model: PhaseNoiseModel, f_hz) -> np.ndarray:
    """One-sided PSD in rad^2/Hz (linear units)."""
    return 10.0 ** (np.asarray(psd_eval(model, f_hz)) / 10.0)


def synthesize(model: PhaseNoiseModel, length: int, sample_rate_hz: float, seed: int) -> PnSamplePath:
    """Synthesize a phase sample path by frequency-domain coloring.

    Independent complex Gaussian coefficients on the positive-frequency
    bins are shaped by the PSD, the DC bin is zeroed (zero-mean path by
    construction) and the Hermitian inverse transform yields the real
    trajectory. Each positive bin carries half of that frequency's
    one-sided power because its mirror bin carries the other half, so the
    band power of the output matches the integral of S(f). Deterministic
    in seed.
    """
    if length < 2:
        raise ValueError(f"path length must be >= 2, got {length}")
    if sample_rate_hz <= 0:
        raise ValueError("sample rate must be positive")
    rng = np.random.default_rng(seed)
    freqs = np.fft.rfftfreq(length, d=1.0 / sample_rate_hz)
    n_bins = freqs.size
    coeffs = np.zeros(n_bins, dtype=complex)
    s_lin = psd_linear(model, freqs[1:])
    scale = np.sqrt(s_lin * sample_rate_hz * length / 2.0)
    g = rng.standard_normal((n_bins - 1, 2))
    coeffs[1:] = (g[:, 0] + 1j * g[:, 1]) / np.sqrt(2.0) * scale
    if length % 2 == 0:
        # Unpaired Nyquist bin: real coefficient at full (not half) power.
        coeffs[-1] = coeffs[-1].real * 2.0
    phi = np.fft.irfft(coeffs, n=length)
    return PnSamplePath(phi=phi, sample_rate_hz=sample_rate_hz)


def symbol_cpe_weights(
    path: PnSamplePath,
    delay_samples: int,
    symbol_stride: int,
    symbol_offset: int,
    m_symbols: int,
) -> np.ndarray:
    """Differential phase weights w_m = exp(j(phi[t_m - d] - phi[t_m])).

    t_m = symbol_offset + m*symbol_stride indexes the path at symbol m;
    the path must be long enough that t_m - delay_samples never underflows
    (pre-pad the synthesis by delay_samples). All weights have unit modulus.
    """
    if delay_samples < 0:
        raise ValueError("delay must be non-negative")
    t = symbol_offset + np.arange(m_symbols) * symbol_stride
    if t.size and (t[0] - delay_samples < 0 or t[-1] >= path.phi.size):
        raise ValueError(
            f"path of length {path.phi.size} cannot be indexed at "
            f"t in [{t[0] - delay_samples}, {t[-1]}]"
        )
    return np.exp(1j * (path.phi[t - delay_samples] - path.phi[t]))
