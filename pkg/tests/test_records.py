import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oscmemd import (
    DecompositionConfig,
    ImfSet,
    LengthMismatchError,
    NonFiniteError,
    RateInvalidError,
    TimeSeries,
    TooShortError,
    build_record,
    emd_decompose,
    memd_decompose,
    reconstruct,
)

from conftest import tone


def test_three_channels_at_ten_hz():
    rec = build_record(np.zeros((3, 3000)), sample_rate=10.0)
    assert rec.n_channels == 3
    assert rec.n_samples == 3000
    assert rec.sample_rate == 10.0
    assert rec.channel_ids == ("ch1", "ch2", "ch3")


def test_single_zero_channel_is_valid():
    rec = build_record([np.zeros(10)], 10.0)
    assert rec.data.shape == (1, 10)
    assert not rec.data.any()


def test_ragged_channels_rejected():
    with pytest.raises(LengthMismatchError):
        build_record([np.zeros(100), np.zeros(99)], 10.0)


@pytest.mark.parametrize("rate", [0.0, -10.0, float("nan"), float("inf")])
def test_bad_rate_rejected(rate):
    with pytest.raises(RateInvalidError):
        build_record([np.zeros(10)], rate)


def test_too_short_rejected():
    with pytest.raises(TooShortError):
        build_record([np.zeros(3)], 10.0)


def test_id_count_must_match():
    with pytest.raises(LengthMismatchError):
        build_record(np.zeros((2, 10)), 10.0, ids=["a"])


@given(
    n=st.integers(1, 4),
    t=st.integers(4, 50),
    data=st.data(),
    bad=st.sampled_from([np.nan, np.inf, -np.inf]),
)
def test_any_non_finite_sample_rejected(n, t, data, bad):
    ch = data.draw(st.integers(0, n - 1))
    k = data.draw(st.integers(0, t - 1))
    x = np.zeros((n, t))
    x[ch, k] = bad
    with pytest.raises(NonFiniteError):
        build_record(x, 10.0)


def test_records_are_immutable():
    rec = build_record(np.zeros((2, 10)), 10.0)
    with pytest.raises(ValueError):
        rec.data[0, 0] = 1.0
    with pytest.raises(ValueError):
        TimeSeries(np.zeros(5), 1.0).samples[0] = 1.0


def test_time_axis_and_segment():
    rec = build_record(np.arange(20.0)[None, :], 10.0, t0=5.0)
    assert rec.time[0] == 5.0 and rec.time[-1] == pytest.approx(6.9)
    seg = rec.segment(5.5, 6.0)
    assert seg.n_samples == 5
    assert seg.t0 == pytest.approx(5.5)
    np.testing.assert_array_equal(seg.data[0], np.arange(5.0, 10.0))


def test_reconstruct_identity_case_is_exact():
    rec = build_record(np.random.default_rng(0).standard_normal((2, 50)), 10.0)
    empty = ImfSet(np.zeros((0, 2, 50)), rec.data, rec)
    np.testing.assert_array_equal(reconstruct(empty).data, rec.data)


def test_reconstruct_sinusoid():
    _, x = tone(0.3)
    rec = build_record([x], 10.0)
    back = reconstruct(emd_decompose(rec))
    err = np.sqrt(np.mean((back.data - rec.data) ** 2)) / np.sqrt(np.mean(rec.data**2))
    assert err < 1e-8


def test_reconstruct_multichannel_random():
    rng = np.random.default_rng(4)
    rec = build_record(rng.standard_normal((3, 400)).cumsum(axis=1), 10.0)
    imfs = memd_decompose(rec, DecompositionConfig(max_imfs=6))
    back = reconstruct(imfs)
    assert np.max(np.abs(back.data - rec.data)) <= 1e-8 * np.max(np.abs(rec.data))
    # alignment: one IMF block covers every channel
    assert imfs.imfs.shape[1] == 3


def test_imf_set_shape_checked():
    rec = build_record(np.zeros((2, 10)), 10.0)
    with pytest.raises(LengthMismatchError):
        ImfSet(np.zeros((1, 3, 10)), np.zeros((2, 10)), rec)


def test_config_validation():
    with pytest.raises(ValueError):
        DecompositionConfig(sd_threshold=0)
    with pytest.raises(ValueError):
        DecompositionConfig(n_mirror=0)
    assert DecompositionConfig().directions_for(3) == 64
    assert DecompositionConfig().directions_for(12) == 96
