"""Dominant-mode identification from a decomposition.

Every IMF (and the residue) becomes a :class:`ModeCandidate` carrying its
energy, median joint frequency, mean joint amplitude and a per-channel
amplitude/phase "compass". Candidates are classified, trends and noise are
set aside, and the rest are ranked by energy.

Classification rules, checked in this order:

1. ``Trend``: median joint frequency below ``f_trend``, or (N >= 2) the
   per-channel compass phases nearly coincide (circular variance below
   ``v_trend``).
2. ``Noise``: median joint frequency undefined or above ``f_noise``.
3. ``LocalMode``: (N >= 2) one channel holds more than ``local_share`` of the
   candidate's energy.
4. ``Noise``: (N >= 2) the channels do not oscillate in a fixed phase
   relation (energy-weighted phase-locking value below ``min_coherence``).
5. ``InterAreaCandidate`` otherwise.

The module also provides the single-sided FFT amplitude spectrum used as a
baseline.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import EmptyWindowError, TooShortError
from .hilbert import JointModeTrace, _imf_block, interior_slice, joint_mode_trace
from .records import ImfSet

INTERAREA_BAND = (0.1, 1.0)


class Classification(enum.Enum):
    NOISE = "Noise"
    LOCAL_MODE = "LocalMode"
    INTER_AREA = "InterAreaCandidate"
    TREND = "Trend"


@dataclass(frozen=True)
class ClassifierThresholds:
    """Operational thresholds for :func:`classify_trend`.

    Frequencies are in Hz; ``local_share`` and ``min_coherence`` are
    fractions in [0, 1].
    """

    f_trend: float = 0.05
    f_noise: float = 2.0
    local_share: float = 0.8
    v_trend: float = 0.1
    min_coherence: float = 0.5


@dataclass(frozen=True)
class CompassEntry:
    channel_id: str
    amplitude: float
    phase: float


@dataclass(frozen=True, eq=False)
class ModeCandidate:
    imf_index: int
    energy: float
    median_joint_frequency: float
    mean_joint_amplitude: float
    classification: Classification
    per_channel: tuple[CompassEntry, ...]
    channel_energy: np.ndarray
    coherence: float
    is_residue: bool = False

    @property
    def in_interarea_band(self) -> bool:
        lo, hi = INTERAREA_BAND
        return bool(lo <= self.median_joint_frequency <= hi)


class RankedModes(list):
    """Ranked candidates (a plain list) with the set-aside ones in ``excluded``."""

    def __init__(self, ranked=(), excluded=()):
        super().__init__(ranked)
        self.excluded = list(excluded)


def imf_energy(imf_index: int, imf_set: ImfSet) -> float:
    """Sum of squared samples of one IMF over all channels and times.

    Index ``n_imfs`` addresses the residue.
    """
    block = _imf_block(imf_set, imf_index)
    return float(np.sum(block * block))


def circular_variance(angles) -> float:
    """``1 - |mean(exp(i angles))|``; 0 for identical angles, NaN when empty."""
    a = np.asarray(angles, dtype=np.float64)
    a = a[np.isfinite(a)]
    if a.size == 0:
        return float("nan")
    return float(1.0 - np.abs(np.mean(np.exp(1j * a))))


def circular_mean(angles) -> float:
    a = np.asarray(angles, dtype=np.float64)
    a = a[np.isfinite(a)]
    if a.size == 0:
        return float("nan")
    return float(np.angle(np.mean(np.exp(1j * a))))


def _window_slice(time: np.ndarray, window) -> slice:
    if window is None:
        return interior_slice(time.size)
    start, stop = window
    idx = np.flatnonzero((time >= start) & (time < stop))
    if idx.size == 0:
        raise EmptyWindowError(f"no samples in window [{start}, {stop})")
    return slice(int(idx[0]), int(idx[-1]) + 1)


def mode_compass(candidate, imf_set: ImfSet, traces: JointModeTrace | None = None, window=None) -> tuple[CompassEntry, ...]:
    """Per-channel mean amplitude and phase relative to channel 1.

    ``candidate`` is a :class:`ModeCandidate` or a plain IMF index.
    ``window`` is a ``(start, stop)`` time range in seconds (record time
    axis); the default is the interior 80% of the record. Each phase is the
    circular mean of ``phase_n(t) - phase_1(t)`` over the window.
    """
    index = candidate.imf_index if isinstance(candidate, ModeCandidate) else int(candidate)
    if traces is None:
        traces = joint_mode_trace(index, imf_set)
    sl = _window_slice(imf_set.source.time, window)
    ref = traces.channel_traces[0].phase[sl]
    entries = []
    for cid, tr in zip(imf_set.source.channel_ids, traces.channel_traces):
        amp = float(np.mean(tr.amplitude[sl]))
        entries.append(CompassEntry(cid, amp, circular_mean(tr.phase[sl] - ref)))
    return tuple(entries)


def phase_coherence(traces: JointModeTrace, channel_energy: np.ndarray, sl: slice) -> float:
    """Energy-weighted phase-locking value against the most energetic channel.

    1 when every channel keeps a fixed phase offset to the reference, near 0
    when the offsets wander. NaN for a single channel.
    """
    n = len(traces.channel_traces)
    if n < 2:
        return float("nan")
    ref = int(np.argmax(channel_energy))
    ref_phase = traces.channel_traces[ref].phase[sl]
    num = den = 0.0
    for ch, tr in enumerate(traces.channel_traces):
        if ch == ref:
            continue
        d = tr.phase[sl] - ref_phase
        d = d[np.isfinite(d)]
        plv = float(np.abs(np.mean(np.exp(1j * d)))) if d.size else 0.0
        num += channel_energy[ch] * plv
        den += channel_energy[ch]
    return num / den if den > 0 else 0.0


def classify_trend(candidate: ModeCandidate, imf_traces=None, thresholds: ClassifierThresholds | None = None) -> Classification:
    """Apply the Trend / LocalMode / Noise / InterAreaCandidate rules.

    ``imf_traces`` is accepted for interface symmetry; everything needed is
    already on the candidate.
    """
    th = thresholds or ClassifierThresholds()
    f = candidate.median_joint_frequency
    n = len(candidate.per_channel)
    if np.isfinite(f) and f < th.f_trend:
        return Classification.TREND
    if n >= 2:
        cv = circular_variance([e.phase for e in candidate.per_channel])
        if np.isfinite(cv) and cv < th.v_trend:
            return Classification.TREND
    if not np.isfinite(f) or f > th.f_noise:
        return Classification.NOISE
    if n < 2:
        return Classification.INTER_AREA
    total = float(np.sum(candidate.channel_energy))
    if total > 0 and np.max(candidate.channel_energy) / total > th.local_share:
        return Classification.LOCAL_MODE
    if not candidate.coherence >= th.min_coherence:
        return Classification.NOISE
    return Classification.INTER_AREA


def build_candidate(imf_index: int, imf_set: ImfSet, traces: JointModeTrace | None = None, thresholds: ClassifierThresholds | None = None) -> ModeCandidate:
    """Measure and classify one IMF (or the residue at index ``n_imfs``)."""
    if traces is None:
        traces = joint_mode_trace(imf_index, imf_set)
    block = _imf_block(imf_set, imf_index)
    channel_energy = np.sum(block * block, axis=1)
    sl = interior_slice(block.shape[1])
    jf = traces.joint_frequency[sl]
    jf = jf[np.isfinite(jf)]
    median_f = float(np.median(jf)) if jf.size else float("nan")
    mean_a = float(np.mean(traces.joint_amplitude[sl]))
    compass = mode_compass(imf_index, imf_set, traces)
    coherence = phase_coherence(traces, channel_energy, sl)
    cand = ModeCandidate(
        imf_index=imf_index,
        energy=float(channel_energy.sum()),
        median_joint_frequency=median_f,
        mean_joint_amplitude=mean_a,
        classification=Classification.NOISE,
        per_channel=compass,
        channel_energy=channel_energy,
        coherence=coherence,
        is_residue=imf_index == imf_set.n_imfs,
    )
    label = classify_trend(cand, traces, thresholds)
    return ModeCandidate(**{**cand.__dict__, "classification": label})


def all_candidates(imf_set: ImfSet, traces=None, thresholds: ClassifierThresholds | None = None, include_residue: bool = True) -> list[ModeCandidate]:
    """Candidates for every IMF in index order, then the residue."""
    traces = traces or {}
    last = imf_set.n_imfs + (1 if include_residue else 0)
    return [build_candidate(m, imf_set, traces.get(m), thresholds) for m in range(last)]


def rank_candidates(candidates) -> RankedModes:
    """Split candidates into ranked (InterArea / Local, by energy) and excluded."""
    keep = [c for c in candidates if c.classification in (Classification.INTER_AREA, Classification.LOCAL_MODE)]
    keep.sort(key=lambda c: (-c.energy, c.imf_index))
    excluded = [c for c in candidates if c.classification in (Classification.TREND, Classification.NOISE)]
    return RankedModes(keep, excluded)


def rank_modes(imf_set: ImfSet, traces=None, thresholds: ClassifierThresholds | None = None, include_residue: bool = True) -> RankedModes:
    """Classify all IMFs and rank the non-Trend, non-Noise ones by energy.

    ``traces`` optionally maps IMF index to a precomputed
    :class:`JointModeTrace`. Equal energies keep the lower (faster) IMF
    first. Trend and Noise candidates are returned in ``.excluded``.
    """
    return rank_candidates(all_candidates(imf_set, traces, thresholds, include_residue))


class Window(enum.Enum):
    RECT = "rect"
    HANN = "hann"


@dataclass(frozen=True, eq=False)
class AmplitudeSpectrum:
    frequencies: np.ndarray
    amplitudes: np.ndarray

    @property
    def resolution(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])


def fft_amplitude_spectrum(series, sample_rate: float | None = None, window="rect", remove_mean: bool = False) -> AmplitudeSpectrum:
    """Single-sided amplitude spectrum.

    The magnitude of the DFT is scaled by ``2 / sum(w)`` (``1 / sum(w)`` at DC
    and Nyquist), where ``w`` is the window, so a tone of amplitude ``A`` on
    an exact bin reads ``A`` with either window.
    """
    if sample_rate is None:
        sample_rate = getattr(series, "sample_rate", 1.0)
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or x.size < 4:
        raise TooShortError(f"spectrum needs a 1-d series of >= 4 samples, got shape {x.shape}")
    if remove_mean:
        x = x - x.mean()
    w = np.hanning(x.size) if Window(window) is Window.HANN else np.ones(x.size)
    amp = np.abs(np.fft.rfft(x * w)) * (2.0 / w.sum())
    amp[0] /= 2.0
    if x.size % 2 == 0:
        amp[-1] /= 2.0
    return AmplitudeSpectrum(np.fft.rfftfreq(x.size, 1.0 / sample_rate), amp)


@dataclass(frozen=True)
class SpectralCrest:
    frequency: float
    amplitude: float
    prominence: float
    low_prominence: bool


def spectral_crest(spectrum: AmplitudeSpectrum, f_min: float = 0.05, f_max: float | None = None, min_prominence: float = 5.0) -> SpectralCrest:
    """Largest amplitude bin in ``[f_min, f_max]``.

    ``prominence`` is the crest amplitude over the median amplitude in the
    searched band; below ``min_prominence`` the crest is flagged as not
    clearly distinguishable from the background.
    """
    f = spectrum.frequencies
    hi = f[-1] if f_max is None else f_max
    band = np.flatnonzero((f >= f_min) & (f <= hi))
    if band.size == 0:
        raise EmptyWindowError(f"no spectral bins in [{f_min}, {hi}] Hz")
    a = spectrum.amplitudes[band]
    k = int(np.argmax(a))
    med = float(np.median(a))
    prom = float(a[k] / med) if med > 0 else (float("inf") if a[k] > 0 else 0.0)
    return SpectralCrest(float(f[band[k]]), float(a[k]), prom, prom < min_prominence)

