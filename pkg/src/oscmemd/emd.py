"""Univariate empirical mode decomposition.

The sifting stop rule is the pointwise normalised squared deviation between
successive sifts,

    SD = sum_t (h_new[t] - h_prev[t])**2 / (h_prev[t]**2 + eps)

compared against ``config.sd_threshold``. ``eps`` keeps the ratio finite at
exact zero crossings.
"""

from __future__ import annotations

import numpy as np

from .envelope import envelope_mean_univariate
from .exceptions import InsufficientExtremaError, LengthMismatchError
from .records import DecompositionConfig, ImfSet, SiftInfo, as_record

EPS_SCALE = 1e-12


def sd_epsilon(x) -> float:
    """Denominator guard ``1e-12 * rms(x)**2`` (never exactly zero)."""
    x = np.asarray(x, dtype=np.float64)
    eps = EPS_SCALE * float(np.mean(x * x)) if x.size else 0.0
    return eps if eps > 0 else np.finfo(np.float64).tiny


def sd_criterion(prev, curr, epsilon: float) -> float:
    prev = np.asarray(prev, dtype=np.float64)
    curr = np.asarray(curr, dtype=np.float64)
    if prev.shape != curr.shape:
        raise LengthMismatchError(f"shapes differ: {prev.shape} vs {curr.shape}")
    diff = curr - prev
    return float(np.sum(diff * diff / (prev * prev + epsilon)))


def sift_once(series, config: DecompositionConfig | None = None) -> np.ndarray:
    """Subtract the envelope mean once."""
    config = config or DecompositionConfig()
    x = np.asarray(series, dtype=np.float64)
    return x - envelope_mean_univariate(x, config.n_mirror)


def sift_to_imf(series, config: DecompositionConfig | None = None) -> tuple[np.ndarray, SiftInfo]:
    """Sift until the SD criterion passes or the iteration cap is reached.

    Raises :class:`InsufficientExtremaError` only when the very first sift is
    impossible; if extrema run out later the current iterate is returned.
    """
    config = config or DecompositionConfig()
    h = np.asarray(series, dtype=np.float64)
    eps = sd_epsilon(h)
    h = sift_once(h, config)
    iterations, sd = 1, None
    while iterations < config.max_sift_iterations:
        try:
            nxt = sift_once(h, config)
        except InsufficientExtremaError:
            break
        iterations += 1
        sd = sd_criterion(h, nxt, eps)
        h = nxt
        if sd <= config.sd_threshold:
            return h, SiftInfo(iterations, False, sd)
    return h, SiftInfo(iterations, iterations >= config.max_sift_iterations, sd)


def emd_decompose(series, config: DecompositionConfig | None = None) -> ImfSet:
    """Extract IMFs from one channel until the residue runs out of extrema.

    ``series`` may be a :class:`TimeSeries`, a single-channel record or a bare
    1-d array (sample rate 1). A signal without enough extrema yields an
    :class:`ImfSet` with zero IMFs and the input as residue.
    """
    config = config or DecompositionConfig()
    record = as_record(series)
    if record.n_channels != 1:
        raise LengthMismatchError(f"emd_decompose takes one channel, got {record.n_channels}")
    residue = record.data[0].copy()
    imfs, infos = [], []
    while len(imfs) < config.max_imfs:
        try:
            imf, info = sift_to_imf(residue, config)
        except InsufficientExtremaError:
            break
        imfs.append(imf)
        infos.append(info)
        residue = residue - imf
    block = np.array(imfs)[:, None, :] if imfs else np.zeros((0, 1, record.n_samples))
    return ImfSet(block, residue[None, :], record, tuple(infos))

