"""Experiment-config and model-file parsing plus CSV emission.

Config files are TOML with four optional sections (system, target, sweep,
phase_noise); every key falls back to the reference defaults, so an empty
or missing file reproduces the default experiment. All CSV output is
self-describing: '#' comment lines record the artifact version and the
fully resolved configuration.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import isacsim
from isacsim.channel import TargetScenario
from isacsim.config import SystemConfig
from isacsim.experiment import SweepRow, SweepSpec
from isacsim.phase_noise import PhaseNoiseModel, builtin_model

SWEEP_HEADER = (
    "snr_db,pn,fc_hz,rmse_range_m,rmse_velocity_mps,mean_pslr_db,"
    "mean_islr_db,crb_range_m,crb_velocity_mps,trials"
)
NUMEROLOGY_HEADER = "mu,delta_f_hz,n_subcarriers,t_symbol_s,range_res_m,velocity_res_mps"
PSD_HEADER = "f_hz,psd_dbc_hz"
MAP_HEADER = "k,l,power_db"

_SYSTEM_KEYS = {"f_c_hz", "mu", "n_subcarriers", "m_symbols", "n_cp", "k_fft", "l_fft", "window"}
_TARGET_KEYS = {"range_m", "velocity_mps", "amplitude", "rcs_dbsm"}
_SWEEP_KEYS = {"snr_db", "trials", "master_seed"}
_PN_KEYS = {"mode", "preset", "file"}


class ConfigError(Exception):
    """Malformed or inconsistent experiment configuration."""


@dataclass(frozen=True)
class ExperimentSetup:
    """Resolved experiment configuration (file values over defaults)."""

    cfg: SystemConfig = field(default_factory=SystemConfig)
    scenario: TargetScenario = field(default_factory=TargetScenario)
    snr_list_db: tuple[float, ...] = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    trials: int = 200
    master_seed: int = 20240817
    pn_mode: str = "per_sample"
    pn_model: PhaseNoiseModel | None = None

    def sweep_spec(self) -> SweepSpec:
        variants = (None,) if self.pn_mode == "off" or self.pn_model is None else (None, self.pn_model)
        return SweepSpec(
            cfg=self.cfg,
            scenario=self.scenario,
            snr_list_db=self.snr_list_db,
            trials=self.trials,
            pn_variants=variants,
            pn_mode=self.pn_mode if self.pn_mode != "off" else "per_sample",
            master_seed=self.master_seed,
        )


def _check_keys(section: str, table: dict, allowed: set[str]):
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")


def _load_toml(path: str | Path) -> dict:
    # unreadable files propagate as OSError (exit 3); only malformed
    # content is a config error (exit 2)
    with open(path, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc


def load_pn_model_file(path: str | Path) -> PhaseNoiseModel:
    """Load a phase-noise profile from a TOML file.

    Required keys: ref_level_dbc, white_floor_dbc and
    poles = [[corner_hz, order], ...]; an optional name labels the model.
    """
    data = _load_toml(path)
    _check_keys("phase-noise model", data, {"name", "ref_level_dbc", "white_floor_dbc", "poles"})
    try:
        poles = tuple((float(c), int(o)) for c, o in data["poles"])
        return PhaseNoiseModel(
            name=str(data.get("name", Path(path).stem)),
            ref_level_dbc=float(data["ref_level_dbc"]),
            white_floor_dbc=float(data["white_floor_dbc"]),
            poles=poles,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: invalid phase-noise model: {exc}") from exc


def load_experiment_config(path: str | Path | None) -> ExperimentSetup:
    """Parse an experiment config file; None yields the pure defaults."""
    defaults = ExperimentSetup()
    if path is None:
        return ExperimentSetup(pn_model=builtin_model("tuned_130ghz"))
    data = _load_toml(path)
    _check_keys("top level", data, {"system", "target", "sweep", "phase_noise"})
    sys_tab = data.get("system", {})
    tgt_tab = data.get("target", {})
    swp_tab = data.get("sweep", {})
    pn_tab = data.get("phase_noise", {})
    _check_keys("system", sys_tab, _SYSTEM_KEYS)
    _check_keys("target", tgt_tab, _TARGET_KEYS)
    _check_keys("sweep", swp_tab, _SWEEP_KEYS)
    _check_keys("phase_noise", pn_tab, _PN_KEYS)

    try:
        cfg = SystemConfig(
            f_c_hz=float(sys_tab.get("f_c_hz", defaults.cfg.f_c_hz)),
            mu=int(sys_tab.get("mu", defaults.cfg.mu)),
            n_subcarriers=int(sys_tab.get("n_subcarriers", defaults.cfg.n_subcarriers)),
            m_symbols=int(sys_tab.get("m_symbols", defaults.cfg.m_symbols)),
            n_cp=int(sys_tab.get("n_cp", defaults.cfg.n_cp)),
            k_fft=int(sys_tab.get("k_fft", defaults.cfg.k_fft)),
            l_fft=int(sys_tab.get("l_fft", defaults.cfg.l_fft)),
            window=str(sys_tab.get("window", defaults.cfg.window)),
        )
        scenario = TargetScenario(
            range_m=float(tgt_tab.get("range_m", defaults.scenario.range_m)),
            velocity_mps=float(tgt_tab.get("velocity_mps", defaults.scenario.velocity_mps)),
            amplitude=float(tgt_tab.get("amplitude", defaults.scenario.amplitude)),
            rcs_dbsm=float(tgt_tab.get("rcs_dbsm", defaults.scenario.rcs_dbsm)),
        )
        snr_list = tuple(float(s) for s in swp_tab.get("snr_db", defaults.snr_list_db))
        trials = int(swp_tab.get("trials", defaults.trials))
        master_seed = int(swp_tab.get("master_seed", defaults.master_seed))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    pn_mode = str(pn_tab.get("mode", defaults.pn_mode))
    if pn_mode not in ("off", "cpe_differential", "per_sample"):
        raise ConfigError(f"{path}: unknown phase_noise.mode {pn_mode!r}")
    if "preset" in pn_tab and "file" in pn_tab:
        raise ConfigError(f"{path}: phase_noise.preset and phase_noise.file are exclusive")
    if "file" in pn_tab:
        pn_model = load_pn_model_file(Path(path).parent / pn_tab["file"])
    elif "preset" in pn_tab:
        try:
            pn_model = builtin_model(str(pn_tab["preset"]))
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    else:
        pn_model = builtin_model("tuned_130ghz")

    return ExperimentSetup(
        cfg=cfg,
        scenario=scenario,
        snr_list_db=snr_list,
        trials=trials,
        master_seed=master_seed,
        pn_mode=pn_mode,
        pn_model=pn_model,
    )


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def config_comment_lines(setup: ExperimentSetup) -> list[str]:
    """'#'-prefixed lines describing the resolved configuration."""
    cfg, tgt = setup.cfg, setup.scenario
    lines = [
        f"# isacsim {isacsim.__version__}",
        f"# system: f_c_hz={_fmt(cfg.f_c_hz)} mu={cfg.mu} delta_f_hz={_fmt(cfg.delta_f_hz)} "
        f"n_subcarriers={cfg.n_subcarriers} m_symbols={cfg.m_symbols} n_cp={cfg.n_cp} "
        f"k_fft={cfg.k_fft} l_fft={cfg.l_fft} window={cfg.window} "
        f"sample_rate_hz={_fmt(cfg.sample_rate_hz)}",
        f"# target: range_m={_fmt(tgt.range_m)} velocity_mps={_fmt(tgt.velocity_mps)} "
        f"amplitude={_fmt(tgt.amplitude)} rcs_dbsm={_fmt(tgt.rcs_dbsm)}",
        f"# sweep: snr_db={list(setup.snr_list_db)} trials={setup.trials} "
        f"master_seed={setup.master_seed}",
        f"# phase_noise: mode={setup.pn_mode} "
        f"model={'none' if setup.pn_model is None else setup.pn_model.name}",
    ]
    return lines


def write_csv(path: str | Path | None, comment_lines: list[str], header: str, rows: list[str]):
    """Write a commented CSV to a path, or stdout when path is None/'-'."""
    text = "\n".join([*comment_lines, header, *rows]) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def sweep_rows_to_csv(rows: tuple[SweepRow, ...]) -> list[str]:
    return [
        ",".join(
            [
                _fmt(r.snr_db),
                r.pn,
                _fmt(r.fc_hz),
                _fmt(r.rmse_range_m),
                _fmt(r.rmse_velocity_mps),
                _fmt(r.mean_pslr_db),
                _fmt(r.mean_islr_db),
                _fmt(r.crb_range_m),
                _fmt(r.crb_velocity_mps),
                str(r.trials),
            ]
        )
        for r in rows
    ]


def sweep_rows_to_json(rows: tuple[SweepRow, ...]) -> list[dict]:
    return [
        {
            "snr_db": r.snr_db,
            "pn": r.pn,
            "fc_hz": r.fc_hz,
            "rmse_range_m": r.rmse_range_m,
            "rmse_velocity_mps": r.rmse_velocity_mps,
            "mean_pslr_db": r.mean_pslr_db,
            "mean_islr_db": r.mean_islr_db,
            "crb_range_m": r.crb_range_m,
            "crb_velocity_mps": r.crb_velocity_mps,
            "trials": r.trials,
        }
        for r in rows
    ]
