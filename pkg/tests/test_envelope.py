import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.interpolate import CubicSpline

from oscmemd import (
    DuplicateKnotIndexError,
    ExtremaSet,
    InsufficientExtremaError,
    TooFewKnotsError,
    envelope_mean_univariate,
    extend_boundaries,
    find_extrema,
    spline_envelope,
)
from oscmemd.envelope import envelopes, extrema_indices, mirror_indices

from conftest import interior, tone


def turning_points_oracle(x):
    """Maxima / minima from sign changes of the first difference (no plateaus)."""
    d = np.diff(x)
    maxima = [i for i in range(1, len(x) - 1) if d[i - 1] > 0 and d[i] < 0]
    minima = [i for i in range(1, len(x) - 1) if d[i - 1] < 0 and d[i] > 0]
    return maxima, minima


def test_single_peak_and_trough():
    ex = find_extrema([0.0, 1.0, 0.0, -1.0, 0.0])
    assert ex.maxima == [(1, 1.0)]
    assert ex.minima == [(3, -1.0)]


def test_ramp_has_no_extrema():
    ex = find_extrema([0.0, 1.0, 2.0, 3.0])
    assert ex.maxima == [] and ex.minima == []


def test_sine_extrema_count():
    _, x = tone(0.3, duration=100.0)
    ex = find_extrema(x)
    mx, mn = turning_points_oracle(x)
    assert ex.max_idx.tolist() == mx
    assert ex.min_idx.tolist() == mn
    assert abs(len(mx) - 30) <= 1 and abs(len(mn) - 30) <= 1


def test_plateau_reports_first_sample():
    ex = find_extrema([0.0, 2.0, 2.0, 2.0, 1.0, -1.0, -1.0, 0.0])
    assert ex.maxima == [(1, 2.0)]
    assert ex.minima == [(5, -1.0)]


def test_plateau_shoulder_is_not_extremum():
    ex = find_extrema([0.0, 1.0, 1.0, 2.0, 3.0])
    assert ex.count == 0


@given(arrays(np.float64, st.integers(3, 60), elements=st.floats(-1e6, 1e6)))
def test_negation_swaps_maxima_and_minima(x):
    a = find_extrema(x)
    b = find_extrema(-x)
    np.testing.assert_array_equal(a.max_idx, b.min_idx)
    np.testing.assert_array_equal(a.min_idx, b.max_idx)


@given(arrays(np.float64, st.integers(3, 60), elements=st.floats(-1e6, 1e6)))
def test_extrema_invariants(x):
    imax, imin = extrema_indices(x)
    for idx in (imax, imin):
        assert np.all(np.diff(idx) > 0)
        assert np.all((idx > 0) & (idx < x.size - 1))
    assert np.all(x[imax] >= x[imax - 1]) and np.all(x[imax] >= x[imax + 1])
    assert np.all(x[imin] <= x[imin - 1]) and np.all(x[imin] <= x[imin + 1])
    # without plateaus the difference-sign oracle is exact
    if np.all(np.diff(x) != 0):
        mx, mn = turning_points_oracle(x)
        assert imax.tolist() == mx and imin.tolist() == mn


def test_mirror_reflection_arithmetic():
    x = np.zeros(100)
    ex = ExtremaSet(np.array([10, 30]), np.array([1.0, 2.0]), np.zeros(0, int), np.zeros(0))
    out = extend_boundaries(x, ex, n_mirror=1)
    assert out.max_idx.tolist() == [-10, 10, 30, 168]
    knots, source = mirror_indices(np.array([10, 30]), 100, 1)
    assert source.tolist() == [10, 10, 30, 30]


def test_mirror_two_each_side():
    knots, source = mirror_indices(np.array([10, 30, 50]), 100, 2)
    assert knots.tolist() == [-30, -10, 10, 30, 50, 148, 168]
    assert source.tolist() == [30, 10, 10, 30, 50, 50, 30]


def test_empty_extrema_rejected():
    empty = ExtremaSet(*(np.zeros(0, int), np.zeros(0)) * 2)
    with pytest.raises(InsufficientExtremaError):
        extend_boundaries(np.zeros(10), empty)


def test_triangle_wave_mirror_matches_periodic_extension():
    period = 20

    def tri(k):
        return np.abs(np.mod(k, period) - period / 2)

    k = np.arange(101)
    x = tri(k)
    out = extend_boundaries(x, find_extrema(x), n_mirror=2)
    wide = np.arange(-60, 161)
    ext = find_extrema(tri(wide))
    ext_max = dict(zip((ext.max_idx + wide[0]).tolist(), ext.max_val.tolist()))
    ext_min = dict(zip((ext.min_idx + wide[0]).tolist(), ext.min_val.tolist()))
    assert out.max_idx.min() < 0 and out.max_idx.max() > 100
    for i, v in out.maxima:
        assert ext_max[i] == v
    for i, v in out.minima:
        assert ext_min[i] == v


def test_spline_collinear_knots_give_line():
    env = spline_envelope([0, 5, 10], [0.0, 5.0, 10.0], 11)
    np.testing.assert_allclose(env, np.arange(11.0), atol=1e-12)


def test_spline_interpolates_middle_knot():
    env = spline_envelope([0, 4, 8], [0.0, 1.0, 0.0], 9)
    assert env[4] == pytest.approx(1.0, abs=1e-12)


def test_spline_two_knots_linear():
    np.testing.assert_allclose(spline_envelope([0, 4], [0.0, 2.0], 5), [0, 0.5, 1, 1.5, 2])


def test_spline_errors():
    with pytest.raises(TooFewKnotsError):
        spline_envelope([3], [1.0], 5)
    with pytest.raises(DuplicateKnotIndexError):
        spline_envelope([0, 2, 2, 5], [0.0, 1.0, 1.0, 0.0], 6)


@given(st.integers(4, 25), st.integers(0, 2**32 - 1))
def test_spline_passes_through_knots(n, seed):
    rng = np.random.default_rng(seed)
    knots = np.sort(rng.choice(np.arange(-20, 120), size=n, replace=False))
    knots[0], knots[-1] = min(knots[0], 0), max(knots[-1], 99)
    knots = np.unique(knots)
    vals = rng.standard_normal(knots.size) * 10
    env = spline_envelope(knots, vals, 100)
    inside = (knots >= 0) & (knots < 100)
    np.testing.assert_allclose(env[knots[inside]], vals[inside], atol=1e-12)


def test_natural_spline_matches_scipy():
    knots = np.array([-7, 3, 11, 20, 34, 41, 55])
    vals = np.sin(knots / 5.0)
    ref = CubicSpline(knots, vals, bc_type="natural")(np.arange(50))
    np.testing.assert_allclose(spline_envelope(knots, vals, 50), ref, atol=1e-12)


def test_sine_upper_envelope_near_one():
    _, x = tone(0.3)
    upper, lower = envelopes(x)
    sl = interior(x.size)
    assert np.max(np.abs(upper[sl] - 1.0)) < 0.01
    assert np.max(np.abs(lower[sl] + 1.0)) < 0.01


def test_envelopes_touch_extrema():
    rng = np.random.default_rng(1)
    x = np.sin(np.arange(300) / 4.0) + 0.2 * rng.standard_normal(300)
    upper, lower = envelopes(x)
    imax, imin = extrema_indices(x)
    np.testing.assert_allclose(upper[imax], x[imax], atol=1e-12)
    np.testing.assert_allclose(lower[imin], x[imin], atol=1e-12)


def test_mean_envelope_of_sinusoid_is_zero():
    _, x = tone(0.3)
    m = envelope_mean_univariate(x)
    assert np.max(np.abs(m[interior(x.size)])) < 0.02


def test_mean_envelope_tracks_offset():
    _, x = tone(0.3)
    m = envelope_mean_univariate(x + 3.5)
    assert np.max(np.abs(m[interior(x.size)] - 3.5)) < 0.02


def test_mean_envelope_of_ramp_fails():
    with pytest.raises(InsufficientExtremaError):
        envelope_mean_univariate(np.arange(50.0))


def test_mirror_of_periodic_signal_matches_periodic_envelope():
    # period 50 divides the length; maxima have varying heights
    def sig(k):
        return np.cos(2 * np.pi * k / 10) + 0.3 * np.cos(2 * np.pi * k / 50 + 0.4)

    t = 2000
    x = sig(np.arange(t))
    upper, _ = envelopes(x)
    wide = np.arange(-1000, t + 1000)
    imax, _ = extrema_indices(sig(wide))
    true_upper = CubicSpline(wide[imax], sig(wide)[imax], bc_type="natural")(np.arange(t))
    sl = interior(t)
    assert np.max(np.abs(upper[sl] - true_upper[sl])) < 1e-6
