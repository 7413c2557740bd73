"""End-to-end analysis of one record.

:func:`analyze_record` decomposes, computes joint Hilbert traces, classifies
and ranks the IMFs, and collects the warnings a report should carry.
:func:`compare_record` sets the dominant MEMD mode beside the FFT crest of
every channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import AnalysisConfig
from .hilbert import EDGE_FRACTION, JointModeTrace, interior_slice, joint_mode_trace
from .memd import memd_decompose
from .modes import (
    AmplitudeSpectrum,
    Classification,
    ModeCandidate,
    RankedModes,
    SpectralCrest,
    all_candidates,
    fft_amplitude_spectrum,
    rank_candidates,
    spectral_crest,
)
from .records import ImfSet, MultichannelRecord


@dataclass(frozen=True)
class ReportWarning:
    """A report warning: a stable ``code``, a message and an optional IMF index."""

    code: str
    message: str
    imf_index: int | None = None


@dataclass(frozen=True, eq=False)
class AnalysisResult:
    record: MultichannelRecord
    config: AnalysisConfig
    imf_set: ImfSet
    traces: dict[int, JointModeTrace]
    candidates: list[ModeCandidate]
    ranked: RankedModes
    warnings: tuple[ReportWarning, ...]

    @property
    def degenerate(self) -> bool:
        return self.imf_set.n_imfs == 0


def _trace_warnings(index: int, trace: JointModeTrace) -> list[ReportWarning]:
    out = []
    jf = trace.joint_frequency[interior_slice(trace.joint_frequency.size)]
    n_undef = int(np.count_nonzero(~np.isfinite(jf)))
    if n_undef:
        out.append(ReportWarning("undefined_frequency", f"{n_undef} of {jf.size} interior samples have no defined frequency", index))
    n_neg = int(np.count_nonzero(jf[np.isfinite(jf)] < 0))
    if n_neg:
        out.append(ReportWarning("negative_frequency", f"{n_neg} of {jf.size} interior samples have negative instantaneous frequency", index))
    return out


def analyze_record(record: MultichannelRecord, config: AnalysisConfig | None = None) -> AnalysisResult:
    config = config or AnalysisConfig()
    imf_set = memd_decompose(record, config.decomposition)
    traces = {m: joint_mode_trace(m, imf_set) for m in range(imf_set.n_imfs + 1)}
    candidates = all_candidates(imf_set, traces, config.thresholds)
    ranked = rank_candidates(candidates)

    warnings: list[ReportWarning] = []
    if imf_set.n_imfs == 0:
        warnings.append(ReportWarning("no_imfs", "the record has too few extrema to extract any IMF"))
    for m, info in enumerate(imf_set.sift_info):
        if info.exhausted:
            warnings.append(ReportWarning("iteration_cap", f"sifting stopped at the cap of {info.iterations} iterations", m))
        if info.skipped_directions:
            warnings.append(
                ReportWarning("degenerate_directions", f"up to {info.skipped_directions} directions lacked 2 maxima and were skipped", m)
            )
    for m in range(imf_set.n_imfs):
        warnings.extend(_trace_warnings(m, traces[m]))
    t = record.n_samples
    k = int(round(EDGE_FRACTION * t))
    if k:
        warnings.append(
            ReportWarning("edge_low_confidence", f"samples [0, {k}) and [{t - k}, {t}) are edge-affected; summaries use the interior 80%")
        )
    return AnalysisResult(record, config, imf_set, traces, candidates, ranked, tuple(warnings))


@dataclass(frozen=True, eq=False)
class Comparison:
    memd_frequency: float
    memd_candidate: ModeCandidate | None
    channel_crests: tuple[SpectralCrest, ...]
    pooled_crest: SpectralCrest
    spectra: tuple[AmplitudeSpectrum, ...]
    analysis: AnalysisResult
    warnings: tuple[ReportWarning, ...]


def channel_spectra(record: MultichannelRecord, config: AnalysisConfig) -> tuple[AmplitudeSpectrum, ...]:
    return tuple(
        fft_amplitude_spectrum(row, record.sample_rate, config.spectrum_window, remove_mean=True) for row in record.data
    )


def compare_record(record: MultichannelRecord, config: AnalysisConfig | None = None) -> Comparison:
    """Dominant MEMD mode versus per-channel and pooled FFT spectral crests.

    The pooled spectrum is the mean of the channel amplitude spectra. The
    dominant mode is the highest-energy InterAreaCandidate, falling back to
    the top-ranked candidate of any kind.
    """
    config = config or AnalysisConfig()
    analysis = analyze_record(record, config)
    spectra = channel_spectra(record, config)
    crests = tuple(spectral_crest(s, config.crest_f_min, min_prominence=config.min_prominence) for s in spectra)
    pooled = AmplitudeSpectrum(spectra[0].frequencies, np.mean([s.amplitudes for s in spectra], axis=0))
    pooled_crest = spectral_crest(pooled, config.crest_f_min, min_prominence=config.min_prominence)
    inter = [c for c in analysis.ranked if c.classification is Classification.INTER_AREA]
    top = inter[0] if inter else (analysis.ranked[0] if len(analysis.ranked) else None)
    warnings = list(analysis.warnings)
    if not inter:
        warnings.append(ReportWarning("no_interarea_candidate", "no IMF qualifies as an inter-area candidate"))
    for cid, crest in zip(record.channel_ids, crests):
        if crest.low_prominence:
            warnings.append(
                ReportWarning("low_prominence", f"channel {cid}: FFT crest at {crest.frequency:.4g} Hz is only {crest.prominence:.3g}x the median")
            )
    if pooled_crest.low_prominence:
        warnings.append(ReportWarning("low_prominence", f"pooled FFT crest is only {pooled_crest.prominence:.3g}x the median"))
    freq = top.median_joint_frequency if top is not None else float("nan")
    return Comparison(freq, top, crests, pooled_crest, spectra, analysis, tuple(warnings))
