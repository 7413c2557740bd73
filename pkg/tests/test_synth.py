from dataclasses import replace
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oscmemd import BadScenarioError, TooFewCrossingsError, memd_decompose, rank_modes
from oscmemd.synth import (
    EVENT_TIME,
    ModeSpec,
    ScenarioSpec,
    StepEvent,
    european_scenario,
    event_scenario,
    generate,
    measured_snr_db,
    mode_component,
    oracle_zero_crossing_frequency,
    recovery_report,
)


def closed_form(t, freq, amp, phase, zeta=0.0, onset=0.0):
    out = np.zeros_like(t)
    for i, ti in enumerate(t.tolist()):
        tau = ti - onset
        if tau >= 0:
            out[i] = amp * np.exp(-2 * np.pi * freq * zeta * tau) * np.sin(2 * np.pi * freq * tau + phase)
    return out


def fake_candidate(freq):
    return SimpleNamespace(median_joint_frequency=freq)


def test_sustained_mode_closed_form():
    sc = ScenarioSpec(modes=(ModeSpec(0.3, ((1.0, 0.0), (0.5, 1.2))),), duration=60.0)
    rec, _ = generate(sc)
    t = np.arange(600) / 10.0
    np.testing.assert_allclose(rec.data[0], closed_form(t, 0.3, 1.0, 0.0), atol=1e-12)
    np.testing.assert_allclose(rec.data[1], closed_form(t, 0.3, 0.5, 1.2), atol=1e-12)


def test_damped_delayed_mode_closed_form():
    sc = ScenarioSpec(modes=(ModeSpec(0.2, ((1.5, 0.4),), damping_ratio=0.05, onset_time=20.0),), duration=60.0)
    rec, _ = generate(sc)
    t = np.arange(600) / 10.0
    np.testing.assert_array_equal(rec.data[0, :200], 0.0)
    np.testing.assert_allclose(rec.data[0], closed_form(t, 0.2, 1.5, 0.4, 0.05, 20.0), atol=1e-12)


def test_trend_and_step():
    sc = ScenarioSpec(trend=((1.0, 0.01, 1e-4), (0.0,)), step_event=StepEvent(10.0, (-0.5, 2.0)), duration=30.0)
    rec, _ = generate(sc)
    t = np.arange(300) / 10.0
    np.testing.assert_allclose(rec.data[0], 1 + 0.01 * t + 1e-4 * t**2 - 0.5 * (t >= 10.0), atol=1e-12)
    np.testing.assert_allclose(rec.data[1], 2.0 * (t >= 10.0), atol=1e-12)


@pytest.mark.parametrize("snr", [0.0, 10.0, 25.0])
def test_noise_snr(snr):
    sc = european_scenario(3, noise_snr_db=snr)
    rec, _ = generate(sc)
    assert measured_snr_db(sc, rec) == pytest.approx(snr, abs=0.5)
    # independent oracle: noise = record minus every deterministic term
    t = sc.time
    modes = np.vstack([sum(closed_form(t, m.frequency, *m.per_channel[ch]) for m in sc.modes) for ch in range(3)])
    trend = np.vstack([np.polyval(list(reversed(c)), t) for c in sc.trend])
    noise = rec.data - modes - trend
    assert 10 * np.log10(np.mean(modes**2) / np.mean(noise**2)) == pytest.approx(snr, abs=0.5)


def test_noise_weights_shape_channel_noise():
    sc = european_scenario(1)
    rec, _ = generate(sc)
    clean, _ = generate(replace(sc, noise_snr_db=None))
    rms = np.sqrt(np.mean((rec.data - clean.data) ** 2, axis=1))
    np.testing.assert_allclose(rms / rms[2], np.array(sc.noise_weights) / sc.noise_weights[2], rtol=1e-6)


def test_noise_without_modes_uses_unit_power():
    rec, _ = generate(ScenarioSpec(n_channels=2, noise_snr_db=0.0, duration=100.0))
    assert np.mean(rec.data**2) == pytest.approx(1.0, rel=1e-9)


def test_lowpass_noise_is_band_limited():
    rec, _ = generate(ScenarioSpec(n_channels=1, noise_snr_db=0.0, noise_lowpass_hz=1.0, duration=300.0))
    p = np.abs(np.fft.rfft(rec.data[0])) ** 2
    f = np.fft.rfftfreq(rec.n_samples, 0.1)
    assert p[f > 2.0].sum() < 0.01 * p.sum()


def test_deterministic_and_seed_dependent():
    a, _ = generate(european_scenario(5))
    b, _ = generate(european_scenario(5))
    c, _ = generate(european_scenario(5).with_seed(6))
    assert a.data.tobytes() == b.data.tobytes()
    assert not np.array_equal(a.data, c.data)


def test_power_is_half_sum_of_squares():
    amps = (1.0, 0.6, 0.3)
    modes = tuple(ModeSpec(f, ((a, 0.3 * k),)) for k, (f, a) in enumerate(zip((0.1, 0.3, 0.7), amps)))
    rec, _ = generate(ScenarioSpec(modes=modes))
    assert np.mean(rec.data[0] ** 2) == pytest.approx(sum(a * a for a in amps) / 2, rel=0.01)


def test_returns_scenario_and_ids():
    sc = european_scenario(0)
    rec, back = generate(sc)
    assert back is sc
    assert rec.channel_ids == ("north", "centre", "south")
    assert rec.sample_rate == 10.0 and rec.n_samples == 3000


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(duration=0.0, n_channels=1),
        dict(sample_rate=-1.0, n_channels=1),
        dict(modes=(ModeSpec(0.3, ((1.0, 0.0),)),), trend=((0.0,), (0.0,))),
        dict(n_channels=2, noise_weights=(1.0,)),
        dict(n_channels=2, noise_weights=(0.0, 0.0)),
        dict(n_channels=1, noise_lowpass_hz=6.0),
        dict(),
    ],
)
def test_bad_scenarios(kwargs):
    with pytest.raises(BadScenarioError):
        ScenarioSpec(**kwargs)


@pytest.mark.parametrize("kwargs", [dict(frequency=0.0), dict(frequency=-1.0), dict(per_channel=((-1.0, 0.0),))])
def test_bad_modes(kwargs):
    base = dict(frequency=0.3, per_channel=((1.0, 0.0),))
    with pytest.raises(BadScenarioError):
        ModeSpec(**{**base, **kwargs})


def test_zero_crossing_oracle_tone():
    t = np.arange(1000) / 10.0
    assert oracle_zero_crossing_frequency(np.sin(2 * np.pi * 0.3 * t + 0.2), 10.0) == pytest.approx(0.3, abs=0.003)
    assert oracle_zero_crossing_frequency(np.sin(2 * np.pi * 1.0 * t + 0.2), 10.0) == pytest.approx(1.0, abs=0.01)


def test_zero_crossing_oracle_uses_record_rate():
    sc = ScenarioSpec(modes=(ModeSpec(0.25, ((1.0, 0.1),)),))
    rec, _ = generate(sc)
    assert oracle_zero_crossing_frequency(rec.data[0], 10.0) == pytest.approx(0.25, abs=0.003)


def test_zero_crossing_oracle_needs_crossings():
    with pytest.raises(TooFewCrossingsError):
        oracle_zero_crossing_frequency(np.full(100, 3.0), 10.0)


@given(st.floats(0.05, 2.0), st.floats(0, 6.28))
def test_zero_crossing_agrees_with_fft_peak(freq, phase):
    t = np.arange(3000) / 10.0
    x = np.sin(2 * np.pi * freq * t + phase)
    f = np.fft.rfftfreq(t.size, 0.1)
    peak = f[np.argmax(np.abs(np.fft.rfft(x)))]
    assert abs(oracle_zero_crossing_frequency(x, 10.0) - peak) <= f[1] + 1e-12


def test_recovery_matches_close_pairs():
    truth = ScenarioSpec(modes=(ModeSpec(0.30, ((1.0, 0.0),)), ModeSpec(0.15, ((1.0, 0.0),))))
    report = recovery_report(truth, [fake_candidate(0.295), fake_candidate(0.152)])
    by_f = {r.truth_frequency: r for r in report}
    assert by_f[0.30].error == pytest.approx(-0.005) and by_f[0.30].rank == 1
    assert by_f[0.15].error == pytest.approx(0.002) and by_f[0.15].rank == 2


def test_recovery_missed_on_empty():
    truth = ScenarioSpec(modes=(ModeSpec(0.30, ((1.0, 0.0),)),))
    (r,) = recovery_report(truth, [])
    assert r.missed and r.error is None and r.rank is None


def test_recovery_tolerance_and_nan():
    truth = ScenarioSpec(modes=(ModeSpec(0.30, ((1.0, 0.0),)),))
    assert recovery_report(truth, [fake_candidate(0.5)], tolerance=0.05)[0].missed
    assert recovery_report(truth, [fake_candidate(float("nan"))])[0].missed


def test_recovery_counts_shared_frequency_once():
    assert len(recovery_report(event_scenario(0), [fake_candidate(0.2)])) == 1


def test_event_scenario_layout():
    sc = event_scenario(0)
    rec, _ = generate(sc)
    assert rec.n_channels == 12 and rec.n_samples == 3000
    assert all(m.frequency == 0.2 for m in sc.modes)
    assert sc.step_event.time == EVENT_TIME
    no_modes, _ = generate(replace(sc, modes=(), noise_snr_db=None, n_channels=12))
    jump = no_modes.data[:, 1250] - no_modes.data[:, 1249]
    # the quadratic trend adds at most ~5e-5 per sample
    np.testing.assert_allclose(jump, sc.step_event.magnitudes, atol=1e-4)
    ring = mode_component(sc.modes[1], sc.time)
    assert not ring[:, :1250].any() and ring[:, 1250:].any()


def test_european_scenario_end_to_end():
    sc = european_scenario(0)
    rec, _ = generate(sc)
    report = recovery_report(sc, rank_modes(memd_decompose(rec)))
    by_f = {r.truth_frequency: r for r in report}
    for f in (0.30, 0.15):
        assert not by_f[f].missed
        assert abs(by_f[f].error) <= 0.02
