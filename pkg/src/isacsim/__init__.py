"""Monostatic OFDM ISAC sensing simulator.

Simulates a single-target OFDM radar at mmWave / sub-THz carriers with
oscillator phase noise, FFT range-Doppler processing and a deterministic
Monte-Carlo sweep harness.
"""

from isacsim.config import SystemConfig
from isacsim.channel import ChannelConfig, ModelValidityError, TargetScenario
from isacsim.experiment import SweepSpec, SweepResult, run_sweep, run_trial
from isacsim.metrics import CrbPoint, SidelobeReport, crb, rmse, sidelobe_metrics
from isacsim.phase_noise import PhaseNoiseModel, PnSamplePath, builtin_model, psd_eval, synthesize
from isacsim.radar import RangeDopplerMap, SensingEstimate, detect_peak, range_doppler_map

__version__ = "0.1.0"

__all__ = [
    "SystemConfig",
    "TargetScenario",
    "ChannelConfig",
    "ModelValidityError",
    "PhaseNoiseModel",
    "PnSamplePath",
    "builtin_model",
    "psd_eval",
    "synthesize",
    "RangeDopplerMap",
    "SensingEstimate",
    "range_doppler_map",
    "detect_peak",
    "SidelobeReport",
    "CrbPoint",
    "rmse",
    "sidelobe_metrics",
    "crb",
    "SweepSpec",
    "SweepResult",
    "run_trial",
    "run_sweep",
    "__version__",
]
