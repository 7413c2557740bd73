"""Hilbert spectral analysis of IMFs.

The discrete Hilbert transform is computed in the frequency domain: zero the
negative frequencies, double the positive ones, invert, and keep the
imaginary part. Instantaneous frequency is the central difference of the
unwrapped phase. Samples whose amplitude falls below ``1e-6 * rms`` carry no
usable phase and are reported as NaN.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter1d

from .exceptions import ImfIndexError, TooShortError
from .records import ImfSet

MIN_HILBERT_LENGTH = 8
AMPLITUDE_FLOOR = 1e-6
EDGE_FRACTION = 0.05


def _analytic(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    spectrum = np.fft.fft(x, axis=-1)
    gain = np.zeros(n)
    gain[0] = 1.0
    if n % 2 == 0:
        gain[1 : n // 2] = 2.0
        gain[n // 2] = 1.0
    else:
        gain[1 : (n + 1) // 2] = 2.0
    return np.fft.ifft(spectrum * gain, axis=-1)


def hilbert_transform(series) -> np.ndarray:
    """Discrete Hilbert transform of a real sequence (cos -> sin)."""
    x = np.asarray(series, dtype=np.float64)
    if x.shape[-1] < MIN_HILBERT_LENGTH:
        raise TooShortError(f"Hilbert transform needs >= {MIN_HILBERT_LENGTH} samples, got {x.shape[-1]}")
    return _analytic(x).imag


@dataclass(frozen=True, eq=False)
class AnalyticTrace:
    """Instantaneous amplitude, unwrapped phase (rad) and frequency (Hz).

    ``phase`` and ``inst_frequency`` are NaN where ``valid`` is False.
    """

    amplitude: np.ndarray
    phase: np.ndarray
    inst_frequency: np.ndarray
    valid: np.ndarray
    sample_rate: float


def analytic_trace(series, sample_rate: float | None = None, smooth: bool = False) -> AnalyticTrace:
    """Amplitude, phase and instantaneous frequency of one real signal.

    The phase is the four-quadrant angle of ``(x, H[x])``. With
    ``smooth=True`` the frequency is passed through a 5-point moving average.
    """
    if sample_rate is None:
        sample_rate = getattr(series, "sample_rate", 1.0)
    x = np.asarray(series, dtype=np.float64)
    xh = hilbert_transform(x)
    amplitude = np.hypot(x, xh)
    phase = np.unwrap(np.arctan2(xh, x))
    freq = np.gradient(phase, 1.0 / sample_rate) / (2.0 * np.pi)
    if smooth:
        freq = uniform_filter1d(freq, size=5, mode="nearest")
    rms = np.sqrt(np.mean(x * x))
    valid = amplitude >= AMPLITUDE_FLOOR * rms if rms > 0 else np.zeros(x.size, dtype=bool)
    phase = np.where(valid, phase, np.nan)
    freq = np.where(valid, freq, np.nan)
    return AnalyticTrace(amplitude, phase, freq, valid, float(sample_rate))


@dataclass(frozen=True, eq=False)
class JointModeTrace:
    """Cross-channel frequency (Hz) and amplitude of one IMF over time."""

    joint_frequency: np.ndarray
    joint_amplitude: np.ndarray
    channel_traces: tuple[AnalyticTrace, ...]
    sample_rate: float


def channel_traces(imf_set: ImfSet, imf_index: int, smooth: bool = False) -> tuple[AnalyticTrace, ...]:
    block = _imf_block(imf_set, imf_index)
    return tuple(analytic_trace(row, imf_set.sample_rate, smooth) for row in block)


def _imf_block(imf_set: ImfSet, imf_index: int) -> np.ndarray:
    """IMF ``imf_index``; index ``n_imfs`` addresses the residue."""
    if not 0 <= imf_index <= imf_set.n_imfs:
        raise ImfIndexError(f"IMF index {imf_index} outside 0..{imf_set.n_imfs}")
    if imf_index == imf_set.n_imfs:
        return imf_set.residue
    return imf_set.imfs[imf_index]


def combine_traces(traces, sample_rate: float, floor: float = 0.0) -> JointModeTrace:
    """Amplitude-weighted mean frequency and plain mean amplitude of traces."""
    amps = np.array([tr.amplitude for tr in traces])
    freqs = np.array([np.where(tr.valid, tr.inst_frequency, 0.0) for tr in traces])
    weights = np.where(np.array([tr.valid for tr in traces]), amps, 0.0)
    wsum = weights.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        joint_f = (weights * freqs).sum(axis=0) / wsum
    undefined = (amps.sum(axis=0) < floor) | (wsum <= 0)
    joint_f = np.where(undefined, np.nan, joint_f)
    return JointModeTrace(joint_f, amps.mean(axis=0), tuple(traces), float(sample_rate))


def joint_mode_trace(imf_index: int, imf_set: ImfSet, smooth: bool = False) -> JointModeTrace:
    """Joint instantaneous frequency and amplitude of IMF ``imf_index``.

    Frequencies are weighted by each channel's instantaneous amplitude;
    amplitudes are averaged with equal weight. Where the summed amplitude is
    below the floor the joint frequency is NaN.
    """
    traces = channel_traces(imf_set, imf_index, smooth)
    block = _imf_block(imf_set, imf_index)
    floor = AMPLITUDE_FLOOR * float(np.sqrt(np.mean(block * block)))
    return combine_traces(traces, imf_set.sample_rate, floor)


def interior_slice(length: int, trim: float = 0.1) -> slice:
    """Slice dropping ``trim`` of the samples at each end."""
    k = int(round(trim * length))
    return slice(k, length - k)


def edge_mask(length: int, fraction: float = EDGE_FRACTION) -> np.ndarray:
    """True on the first/last ``fraction`` of samples, where edge effects dominate."""
    mask = np.zeros(length, dtype=bool)
    k = int(round(fraction * length))
    if k:
        mask[:k] = True
        mask[-k:] = True
    return mask


@dataclass(frozen=True, eq=False)
class SpectrumBand:
    imf_index: int
    time: np.ndarray
    frequency: np.ndarray
    amplitude: np.ndarray


def hilbert_spectrum(imf_set: ImfSet, imf_range=None) -> list[SpectrumBand]:
    """Time/frequency/amplitude samples of the joint trace of each IMF.

    ``imf_range`` is any iterable of IMF indices (default: all IMFs).
    Samples with undefined frequency are dropped.
    """
    if imf_range is None:
        imf_range = range(imf_set.n_imfs)
    time = imf_set.source.time
    bands = []
    for m in imf_range:
        jt = joint_mode_trace(m, imf_set)
        keep = np.isfinite(jt.joint_frequency)
        bands.append(SpectrumBand(m, time[keep], jt.joint_frequency[keep], jt.joint_amplitude[keep]))
    return bands
