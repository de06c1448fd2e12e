"""Command-line interface.

Subcommands: simulate (Monte-Carlo SNR sweep), numerology (resolution
trade-off tables), psd (phase-noise PSD dump) and map (single-trial
range-Doppler map dump). All output is CSV with a '#' comment header
recording the resolved configuration. Exit codes: 0 success, 2 usage or
config error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

import isacsim
from isacsim import numerology
from isacsim.channel import ChannelConfig, add_awgn, apply_phase_noise, apply_target
from isacsim.experiment import run_sweep, trial_seeds
from isacsim.fileio import (
    MAP_HEADER,
    NUMEROLOGY_HEADER,
    PSD_HEADER,
    SWEEP_HEADER,
    ConfigError,
    ExperimentSetup,
    config_comment_lines,
    load_experiment_config,
    load_pn_model_file,
    sweep_rows_to_csv,
    sweep_rows_to_json,
    write_csv,
)
from isacsim.ofdm import demodulate, generate_qam16, modulate
from isacsim.oracle import matched_filter_estimate
from isacsim.phase_noise import builtin_model, psd_eval
from isacsim.radar import compensate, detect_peak, range_doppler_map

SEED_ENV_VAR = "ISAC_SEED"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"invalid number list {text!r}") from exc


def _parse_mu_list(text: str) -> list[int]:
    out: list[int] = []
    try:
        for part in text.split(","):
            if "-" in part[1:]:
                lo, hi = part.split("-")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError as exc:
        raise ConfigError(f"invalid mu list {text!r}") from exc
    if not out:
        raise ConfigError("empty mu list")
    return out


def _master_seed_override(args, setup: ExperimentSetup) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from exc
    return setup.master_seed


def _cmd_simulate(args) -> int:
    setup = load_experiment_config(args.config)
    overrides = {"master_seed": _master_seed_override(args, setup)}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.snr is not None:
        overrides["snr_list_db"] = _parse_float_list(args.snr)
    setup = replace(setup, **overrides)
    result = run_sweep(setup.sweep_spec(), workers=args.workers)
    comments = config_comment_lines(setup)
    write_csv(args.out, comments, SWEEP_HEADER, sweep_rows_to_csv(result.rows))
    if args.json is not None:
        Path(args.json).write_text(json.dumps(sweep_rows_to_json(result.rows), indent=2) + "\n")
    return EXIT_OK


def _cmd_numerology(args) -> int:
    mode = {"fixed-bw": "fixed_bandwidth", "fixed-n": "fixed_n"}.get(args.mode)
    if mode is None:
        raise ConfigError(f"unknown numerology mode {args.mode!r}")
    rows = numerology.tradeoff_table(
        f_c_hz=args.fc,
        mu_list=_parse_mu_list(args.mu),
        mode=mode,
        bandwidth_hz=args.bandwidth,
        n_subcarriers=args.n,
        m_symbols=args.m,
        m_equals_n=args.m_equals_n,
    )
    comments = [
        f"# isacsim {isacsim.__version__}",
        f"# numerology mode={args.mode} f_c_hz={args.fc:.12g} bandwidth_hz={args.bandwidth:.12g} "
        f"n={args.n} m={args.m} m_equals_n={args.m_equals_n}",
    ]
    lines = [
        f"{r.mu},{r.delta_f_hz:.12g},{r.n_subcarriers},{r.t_symbol_s:.12g},"
        f"{r.range_res_m:.12g},{r.velocity_res_mps:.12g}"
        for r in rows
    ]
    write_csv(args.out, comments, NUMEROLOGY_HEADER, lines)
    return EXIT_OK


def _cmd_psd(args) -> int:
    if args.model_file is not None:
        model = load_pn_model_file(args.model_file)
    else:
        try:
            model = builtin_model(args.preset)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if not args.f_min < args.f_max:
        raise ConfigError("f-min must be below f-max")
    if args.points < 2:
        raise ConfigError("at least 2 points required")
    freqs = np.logspace(np.log10(args.f_min), np.log10(args.f_max), args.points)
    levels = psd_eval(model, freqs)
    comments = [
        f"# isacsim {isacsim.__version__}",
        f"# phase-noise model {model.name}: ref={model.ref_level_dbc} dBc/Hz "
        f"floor={model.white_floor_dbc} dBc/Hz poles={list(model.poles)}",
    ]
    lines = [f"{f:.12g},{l:.6f}" for f, l in zip(freqs, levels)]
    write_csv(args.out, comments, PSD_HEADER, lines)
    return EXIT_OK


def _cmd_map(args) -> int:
    setup = load_experiment_config(args.config)
    master_seed = _master_seed_override(args, setup)
    cfg, scenario = setup.cfg, setup.scenario
    pn_on = args.pn == "on"
    if pn_on and setup.pn_model is None:
        raise ConfigError("--pn on requires a phase-noise model in the config")
    snr_db = None if args.snr in (None, "off") else float(args.snr)

    data_seed, noise_seed, pn_seed = trial_seeds(master_seed, 0, int(pn_on), 0)
    tx = generate_qam16(cfg.n_subcarriers, cfg.m_symbols, data_seed)
    rx = apply_target(tx, scenario, cfg)
    if pn_on:
        ccfg = ChannelConfig(
            snr_db=snr_db,
            pn_mode=setup.pn_mode if setup.pn_mode != "off" else "per_sample",
            pn_model=setup.pn_model,
            noise_seed=noise_seed,
            pn_seed=pn_seed,
        )
        if ccfg.pn_mode == "per_sample":
            frame = modulate(rx, cfg.n_cp, cfg.sample_rate_hz)
            rx = demodulate(apply_phase_noise(frame, scenario, cfg, ccfg), cfg.n_subcarriers, cfg.m_symbols)
        else:
            rx = apply_phase_noise(rx, scenario, cfg, ccfg)
    rx = add_awgn(rx, snr_db, noise_seed)
    comp = compensate(rx, tx)
    rd = range_doppler_map(comp, cfg)
    est = detect_peak(rd)

    comments = config_comment_lines(setup) + [
        f"# map: k_fft={rd.k_fft} l_fft={rd.l_fft} range_bin_m={rd.range_bin_m:.12g} "
        f"velocity_bin_mps={rd.velocity_bin_mps:.12g} doppler_dc_bin={rd.doppler_dc_bin}",
        f"# snr_db={'off' if snr_db is None else snr_db} pn={'on' if pn_on else 'off'} "
        f"master_seed={master_seed}",
        f"# estimate: range_m={est.range_m:.12g} velocity_mps={est.velocity_mps:.12g} "
        f"peak_bins=({est.peak_bins[0]},{est.peak_bins[1]})",
    ]
    if args.oracle:
        if cfg.n_subcarriers > 32 or cfg.m_symbols > 16:
            raise ConfigError("--oracle supports grids up to 32 x 16 subcarriers/symbols")
        o_range, o_vel = matched_filter_estimate(comp, cfg)
        comments.append(
            f"# oracle: range_m={o_range:.12g} velocity_mps={o_vel:.12g} "
            f"delta_range_m={est.range_m - o_range:.12g} "
            f"delta_velocity_mps={est.velocity_mps - o_vel:.12g}"
        )

    _write_map_csv(args.out, comments, rd.power)
    return EXIT_OK


def _write_map_csv(path, comments: list[str], power: np.ndarray):
    with np.errstate(divide="ignore"):
        power_db = 10.0 * np.log10(power)
    k_fft, l_fft = power.shape
    out = sys.stdout if path in (None, "-") else open(path, "w")
    try:
        out.write("\n".join(comments) + "\n" + MAP_HEADER + "\n")
        for k in range(k_fft):
            row_db = power_db[k]
            out.write("".join(f"{k},{l},{row_db[l]:.6f}\n" for l in range(l_fft)))
    finally:
        if out is not sys.stdout:
            out.close()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isacsim",
        description="Monostatic OFDM ISAC sensing simulator with oscillator phase noise.",
    )
    parser.add_argument("--version", action="version", version=f"isacsim {isacsim.__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a Monte-Carlo SNR sweep")
    p_sim.add_argument("config", nargs="?", default=None, help="TOML experiment config")
    p_sim.add_argument("--out", default=None, help="sweep CSV path (default: stdout)")
    p_sim.add_argument("--json", default=None, help="also write a JSON mirror of the sweep rows")
    p_sim.add_argument("--trials", type=int, default=None, help="override trial count")
    p_sim.add_argument("--snr", default=None, help="override SNR list, comma separated dB")
    p_sim.add_argument("--seed", type=int, default=None, help="override master seed")
    p_sim.add_argument("--workers", type=int, default=None, help="worker processes for trials")
    p_sim.set_defaults(func=_cmd_simulate)

    p_num = sub.add_parser("numerology", help="print resolution trade-off tables")
    p_num.add_argument("--mode", default="fixed-bw", help="fixed-bw or fixed-n")
    p_num.add_argument("--bandwidth", type=float, default=1.5e9, help="bandwidth in Hz (fixed-bw)")
    p_num.add_argument("--n", type=int, default=256, help="subcarrier count (fixed-n)")
    p_num.add_argument("--fc", type=float, default=130e9, help="carrier frequency in Hz")
    p_num.add_argument("--m", type=int, default=64, help="symbols per frame")
    p_num.add_argument("--mu", default="4-7", help="numerology list, e.g. 4-7 or 4,5,6")
    p_num.add_argument(
        "--m-equals-n",
        action="store_true",
        help="use M=N per row for the velocity column",
    )
    p_num.add_argument("--out", default=None)
    p_num.set_defaults(func=_cmd_numerology)

    p_psd = sub.add_parser("psd", help="dump a phase-noise PSD curve")
    p_psd.add_argument("--preset", default="tuned_130ghz", help="built-in model name")
    p_psd.add_argument("--model-file", default=None, help="TOML model file (overrides preset)")
    p_psd.add_argument("--f-min", type=float, default=1.0)
    p_psd.add_argument("--f-max", type=float, default=1e9)
    p_psd.add_argument("--points", type=int, default=200)
    p_psd.add_argument("--out", default=None)
    p_psd.set_defaults(func=_cmd_psd)

    p_map = sub.add_parser("map", help="dump one trial's range-Doppler map")
    p_map.add_argument("config", nargs="?", default=None, help="TOML experiment config")
    p_map.add_argument("--snr", default=None, help="per-element SNR in dB, or 'off'")
    p_map.add_argument("--pn", choices=("on", "off"), default="off")
    p_map.add_argument("--seed", type=int, default=None, help="override master seed")
    p_map.add_argument("--out", default=None)
    p_map.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check the peak estimate against the dense matched filter (small grids)",
    )
    p_map.set_defaults(func=_cmd_map)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
