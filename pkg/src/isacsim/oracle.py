"""Dense matched-filter reference estimator.

Maximizes |sum_{l,m} g[l,m] exp(+j 2 pi l df tau) exp(-j 2 pi f_D T0 m)|^2
over a (tau, velocity) grid with local refinement. Independent of the FFT
processing path; used to cross-check peak estimates on small grids.
"""

from __future__ import annotations

import numpy as np

from isacsim.config import SystemConfig
from isacsim.numerology import SPEED_OF_LIGHT


def _objective(grid: np.ndarray, cfg: SystemConfig, taus: np.ndarray, vels: np.ndarray) -> np.ndarray:
    n, m = grid.shape
    ell = np.arange(n)
    sym = np.arange(m)
    t0 = cfg.symbol_period_s
    f_d = 2.0 * vels * cfg.f_c_hz / SPEED_OF_LIGHT
    a = np.exp(2j * np.pi * cfg.delta_f_hz * np.outer(taus, ell))  # (T, N)
    b = np.exp(-2j * np.pi * t0 * np.outer(sym, f_d))  # (M, V)
    return np.abs(a @ grid @ b) ** 2


def matched_filter_estimate(
    grid: np.ndarray,
    cfg: SystemConfig,
    coarse: int = 512,
    refine_steps: int = 3,
) -> tuple[float, float]:
    """Return the (range_m, velocity_mps) maximizer of the matched filter.

    Searches the full unambiguous delay/velocity spans on a coarse grid,
    then locally refines by 10x per step around the running maximum.
    """
    tau_span = 1.0 / cfg.delta_f_hz
    vel_half = SPEED_OF_LIGHT / (4.0 * cfg.f_c_hz * cfg.symbol_period_s)
    taus = np.linspace(0.0, tau_span, coarse, endpoint=False)
    vels = np.linspace(-vel_half, vel_half, coarse, endpoint=False)
    d_tau = taus[1] - taus[0]
    d_vel = vels[1] - vels[0]
    for _ in range(refine_steps + 1):
        obj = _objective(grid, cfg, taus, vels)
        it, iv = np.unravel_index(int(np.argmax(obj)), obj.shape)
        tau_c, vel_c = taus[it], vels[iv]
        taus = np.linspace(tau_c - d_tau, tau_c + d_tau, 41)
        vels = np.linspace(vel_c - d_vel, vel_c + d_vel, 41)
        d_tau = taus[1] - taus[0]
        d_vel = vels[1] - vels[0]
    return tau_c * SPEED_OF_LIGHT / 2.0, vel_c
