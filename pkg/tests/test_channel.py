import numpy as np
import pytest

from isacsim.channel import (
    ChannelConfig,
    ModelValidityError,
    TargetScenario,
    add_awgn,
    apply_phase_noise,
    apply_target,
    pn_delay_samples,
)
from isacsim.ofdm import demodulate, generate_qam16, modulate
from isacsim.phase_noise import PnSamplePath, builtin_model
from isacsim.radar import compensate, range_doppler_map


class TestTargetScenario:
    def test_delay_hand_value(self):
        # 2R/c at R = 5 m
        assert TargetScenario(range_m=5.0).delay_s == pytest.approx(33.3564095e-9, rel=1e-8)

    def test_doppler_hand_value(self):
        # 2 v f_c / c at v = 1.5 m/s, f_c = 130 GHz
        assert TargetScenario(velocity_mps=1.5).doppler_hz(130e9) == pytest.approx(1300.9, abs=0.05)

    def test_validation(self):
        with pytest.raises(ValueError):
            TargetScenario(range_m=-1.0)
        with pytest.raises(ValueError):
            TargetScenario(amplitude=-0.5)
        with pytest.raises(ValueError):
            TargetScenario(range_m=5.0, velocity_mps=0.0, amplitude=-1e-9)

    def test_zero_amplitude_allowed(self):
        # supported for all-zero map dumps
        assert TargetScenario(amplitude=0.0).amplitude == 0.0


class TestApplyTarget:
    def test_static_zero_range_target_is_scaled_identity(self, default_cfg):
        tx = generate_qam16(32, 8, seed=1)
        scenario = TargetScenario(range_m=0.0, velocity_mps=0.0, amplitude=0.7)
        rx = apply_target(tx, scenario, default_cfg)
        assert np.array_equal(rx, 0.7 * tx)

    def test_magnitude_preserved(self, default_cfg, default_scenario):
        tx = generate_qam16(default_cfg.n_subcarriers, default_cfg.m_symbols, seed=2)
        rx = apply_target(tx, default_scenario, default_cfg)
        assert np.allclose(np.abs(rx), np.abs(tx), atol=1e-13)

    def test_subcarrier_phase_slope(self, default_cfg, default_scenario):
        tx = generate_qam16(default_cfg.n_subcarriers, default_cfg.m_symbols, seed=3)
        ratio = apply_target(tx, default_scenario, default_cfg) / tx
        phase = np.unwrap(np.angle(ratio[:, 0]))
        ell = np.arange(phase.size)
        slope, intercept = np.polyfit(ell, phase, 1)
        expected = -2 * np.pi * default_cfg.delta_f_hz * default_scenario.delay_s
        assert slope == pytest.approx(expected, rel=1e-10)
        residual = phase - (slope * ell + intercept)
        assert np.max(np.abs(residual)) < 1e-9

    def test_symbol_phase_slope(self, default_cfg, default_scenario):
        tx = generate_qam16(default_cfg.n_subcarriers, default_cfg.m_symbols, seed=4)
        ratio = apply_target(tx, default_scenario, default_cfg) / tx
        phase = np.unwrap(np.angle(ratio[0, :]))
        m = np.arange(phase.size)
        slope = np.polyfit(m, phase, 1)[0]
        expected = (
            2 * np.pi * default_scenario.doppler_hz(default_cfg.f_c_hz) * default_cfg.symbol_period_s
        )
        assert slope == pytest.approx(expected, rel=1e-10)

    def test_delay_beyond_cp_warns(self, default_cfg):
        tx = generate_qam16(8, 2, seed=0)
        scenario = TargetScenario(range_m=100.0)  # tau > CP duration (521 ns)
        with pytest.warns(UserWarning):
            apply_target(tx, scenario, default_cfg)

    def test_delay_beyond_symbol_rejected(self, default_cfg):
        tx = generate_qam16(8, 2, seed=0)
        scenario = TargetScenario(range_m=1000.0)  # tau > symbol period
        with pytest.raises(ModelValidityError):
            apply_target(tx, scenario, default_cfg)


class TestApplyPhaseNoise:
    def test_delay_quantization(self, default_cfg, default_scenario):
        assert pn_delay_samples(default_scenario, default_cfg) == 4

    def test_mode_off_rejected(self, default_cfg, default_scenario):
        ccfg = ChannelConfig(pn_mode="off")
        with pytest.raises(ValueError):
            apply_phase_noise(np.ones((4, 4), dtype=complex), default_scenario, default_cfg, ccfg)

    def test_shape_mode_mismatch_rejected(self, default_cfg, default_scenario):
        model = builtin_model("tuned_130ghz")
        grid = np.ones((4, 4), dtype=complex)
        with pytest.raises(ValueError):
            apply_phase_noise(grid, default_scenario, default_cfg, ChannelConfig(pn_mode="per_sample", pn_model=model))
        frame = modulate(grid, 1)
        with pytest.raises(ValueError):
            apply_phase_noise(frame, default_scenario, default_cfg, ChannelConfig(pn_mode="cpe_differential", pn_model=model))

    def test_cpe_zero_delay_is_identity(self, default_cfg):
        scenario = TargetScenario(range_m=0.0, velocity_mps=1.0)
        ccfg = ChannelConfig(pn_mode="cpe_differential", pn_model=builtin_model("tuned_130ghz"), pn_seed=7)
        grid = generate_qam16(default_cfg.n_subcarriers, default_cfg.m_symbols, seed=1)
        out = apply_phase_noise(grid, scenario, default_cfg, ccfg)
        assert np.array_equal(out, grid)

    def test_per_sample_zero_path_is_identity(self, default_cfg, default_scenario, monkeypatch):
        # phi == 0 with a nonzero delay: weights collapse to unity
        import isacsim.channel as channel_mod

        monkeypatch.setattr(
            channel_mod,
            "synthesize",
            lambda model, length, fs, seed: PnSamplePath(phi=np.zeros(length), sample_rate_hz=fs),
        )
        ccfg = ChannelConfig(pn_mode="per_sample", pn_model=builtin_model("tuned_130ghz"), pn_seed=3)
        grid = generate_qam16(default_cfg.n_subcarriers, default_cfg.m_symbols, seed=2)
        frame = modulate(grid, default_cfg.n_cp, default_cfg.sample_rate_hz)
        out = apply_phase_noise(frame, default_scenario, default_cfg, ccfg)
        assert np.allclose(out.samples, frame.samples, atol=0)

    def test_per_sample_linear_drift_rotates_grid(self, default_cfg, default_scenario, monkeypatch):
        # phi[n] = alpha*n turns the differential weight into exp(-j*alpha*d),
        # a frequency-independent rotation of the demodulated grid.
        import isacsim.channel as channel_mod

        alpha = 2.4e-4
        monkeypatch.setattr(
            channel_mod,
            "synthesize",
            lambda model, length, fs, seed: PnSamplePath(phi=alpha * np.arange(length), sample_rate_hz=fs),
        )
        d = pn_delay_samples(default_scenario, default_cfg)
        ccfg = ChannelConfig(pn_mode="per_sample", pn_model=builtin_model("tuned_130ghz"), pn_seed=3)
        cfg = default_cfg
        grid = generate_qam16(cfg.n_subcarriers, cfg.m_symbols, seed=5)
        frame = modulate(grid, cfg.n_cp, cfg.sample_rate_hz)
        out = apply_phase_noise(frame, default_scenario, cfg, ccfg)
        back = demodulate(out, cfg.n_subcarriers, cfg.m_symbols)
        assert np.allclose(back, grid * np.exp(-1j * alpha * d), atol=1e-10)

    def test_per_sample_pn_raises_off_peak_energy(self, small_cfg, default_scenario):
        # paired comparison over seeds, no AWGN: phase noise must push
        # energy out of the peak neighborhood
        cfg = small_cfg
        model = builtin_model("tuned_130ghz")
        wins = 0
        n_seeds = 50
        for seed in range(n_seeds):
            tx = generate_qam16(cfg.n_subcarriers, cfg.m_symbols, seed=seed)
            rx = apply_target(tx, default_scenario, cfg)
            rd_off = range_doppler_map(compensate(rx, tx), cfg)
            ccfg = ChannelConfig(
                pn_mode="per_sample", pn_model=model, pn_seed=10_000 + seed
            )
            frame = modulate(rx, cfg.n_cp, cfg.sample_rate_hz)
            rx_pn = demodulate(apply_phase_noise(frame, default_scenario, cfg, ccfg), cfg.n_subcarriers, cfg.m_symbols)
            rd_on = range_doppler_map(compensate(rx_pn, tx), cfg)

            k, l = np.unravel_index(np.argmax(rd_off.power), rd_off.power.shape)
            mask = np.ones_like(rd_off.power, dtype=bool)
            mask[max(0, k - 8): k + 9, max(0, l - 8): l + 9] = False
            if np.mean(rd_on.power[mask]) > np.mean(rd_off.power[mask]):
                wins += 1
        assert wins >= int(0.9 * n_seeds)


class TestAddAwgn:
    def test_noise_off_sentinels(self):
        grid = generate_qam16(16, 4, seed=1)
        assert add_awgn(grid, None, seed=0) is grid
        assert add_awgn(grid, np.inf, seed=0) is grid

    def test_measured_snr(self):
        grid = generate_qam16(1000, 1000, seed=2)
        noisy = add_awgn(grid, 10.0, seed=3)
        p_sig = np.mean(np.abs(grid) ** 2)
        p_noise = np.mean(np.abs(noisy - grid) ** 2)
        measured = 10 * np.log10(p_sig / p_noise)
        assert measured == pytest.approx(10.0, abs=0.1)

    def test_deterministic(self):
        grid = generate_qam16(32, 8, seed=4)
        a = add_awgn(grid, 20.0, seed=9)
        b = add_awgn(grid, 20.0, seed=9)
        assert np.array_equal(a, b)
