"""Subcarrier-spacing numerology and radar resolution formulas.

Pure functions: scaled subcarrier spacing, range/velocity resolution and
the trade-off tables that drive waveform selection.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

SPEED_OF_LIGHT = 299_792_458.0  # m/s

_BASE_SPACING_HZ = 15_000.0
MU_MIN = 0
MU_MAX = 7

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResolutionRow:
    """One numerology row of a resolution trade-off table."""

    mu: int
    delta_f_hz: float
    n_subcarriers: int
    t_symbol_s: float
    range_res_m: float
    velocity_res_mps: float


def subcarrier_spacing(mu: int) -> float:
    """Return the subcarrier spacing 15 kHz * 2**mu for scaled numerology index mu."""
    if not MU_MIN <= mu <= MU_MAX:
        raise ValueError(f"numerology index mu must be in [{MU_MIN}, {MU_MAX}], got {mu}")
    return _BASE_SPACING_HZ * 2**mu


def range_resolution(bandwidth_hz: float) -> float:
    """Range resolution c / (2 B) of a waveform occupying bandwidth_hz."""
    if bandwidth_hz <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    return SPEED_OF_LIGHT / (2.0 * bandwidth_hz)


def velocity_resolution(f_c_hz: float, delta_f_hz: float, m_symbols: int) -> float:
    """Velocity resolution c*df / (2 f_c M) for M symbols of duration 1/df."""
    if f_c_hz <= 0 or delta_f_hz <= 0 or m_symbols <= 0:
        raise ValueError("carrier, subcarrier spacing and symbol count must be positive")
    return SPEED_OF_LIGHT * delta_f_hz / (2.0 * f_c_hz * m_symbols)


def tradeoff_table(
    f_c_hz: float,
    mu_list: list[int],
    mode: str = "fixed_bandwidth",
    bandwidth_hz: float = 1.5e9,
    n_subcarriers: int = 256,
    m_symbols: int = 64,
    m_equals_n: bool = False,
) -> list[ResolutionRow]:
    """Build a per-numerology resolution trade-off table.

    Two modes:
      - "fixed_bandwidth": N = floor(B / df) varies per row, range resolution
        is the constant c/(2B).
      - "fixed_n": N is held constant, so the occupied bandwidth N*df and
        the range resolution scale with the numerology.

    With m_equals_n the integration length per row is set to that row's
    subcarrier count instead of m_symbols, i.e. the frame is assumed to
    last N symbol durations. This reproduces tabulated trade-off numbers
    whose velocity column is inconsistent with a fixed M; the substitution
    is logged, never silent.
    """
    if not mu_list:
        raise ValueError("mu_list must not be empty")
    if mode not in ("fixed_bandwidth", "fixed_n"):
        raise ValueError(f"unknown trade-off mode {mode!r}")

    rows = []
    for mu in mu_list:
        df = subcarrier_spacing(mu)
        if mode == "fixed_bandwidth":
            if bandwidth_hz < df:
                raise ValueError(f"bandwidth {bandwidth_hz} Hz below subcarrier spacing at mu={mu}")
            n = int(bandwidth_hz // df)
            d_r = range_resolution(bandwidth_hz)
        else:
            n = n_subcarriers
            d_r = range_resolution(n * df)
        m_eff = n if m_equals_n else m_symbols
        if m_equals_n:
            log.info("tradeoff_table: using M=N=%d for mu=%d instead of M=%d", n, mu, m_symbols)
        rows.append(
            ResolutionRow(
                mu=mu,
                delta_f_hz=df,
                n_subcarriers=n,
                t_symbol_s=1.0 / df,
                range_res_m=d_r,
                velocity_res_mps=velocity_resolution(f_c_hz, df, m_eff),
            )
        )
    return rows
