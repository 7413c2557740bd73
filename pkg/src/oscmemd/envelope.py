"""Extrema, boundary mirroring and spline envelopes.

These are the geometric pieces every decomposition variant shares. All
functions work on plain arrays (a :class:`~oscmemd.records.TimeSeries` is
accepted anywhere an array is).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .exceptions import (
    DuplicateKnotIndexError,
    InsufficientExtremaError,
    TooFewKnotsError,
)


@dataclass(frozen=True, eq=False)
class ExtremaSet:
    """Indices and values of local maxima and minima.

    Indices may be virtual (negative or past the end) after
    :func:`extend_boundaries`.
    """

    max_idx: np.ndarray
    max_val: np.ndarray
    min_idx: np.ndarray
    min_val: np.ndarray

    @property
    def maxima(self) -> list[tuple[int, float]]:
        return list(zip(self.max_idx.tolist(), self.max_val.tolist()))

    @property
    def minima(self) -> list[tuple[int, float]]:
        return list(zip(self.min_idx.tolist(), self.min_val.tolist()))

    @property
    def count(self) -> int:
        return self.max_idx.size + self.min_idx.size


def extrema_indices(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(maxima, minima)`` sample indices of a 1-d array.

    A flat run bounded by lower (higher) samples on both sides counts as a
    single maximum (minimum) located at the first sample of the run.
    Endpoints are never reported.
    """
    x = np.asarray(x, dtype=np.float64)
    d = np.diff(x)
    steps = np.flatnonzero(d)
    if steps.size < 2:
        empty = np.zeros(0, dtype=np.intp)
        return empty, empty.copy()
    rising = d[steps] > 0
    turn = rising[:-1] != rising[1:]
    peaks = steps[:-1][turn & rising[:-1]] + 1
    troughs = steps[:-1][turn & ~rising[:-1]] + 1
    return peaks, troughs


def find_extrema(series) -> ExtremaSet:
    x = np.asarray(series, dtype=np.float64)
    imax, imin = extrema_indices(x)
    return ExtremaSet(imax, x[imax], imin, x[imin])


def count_extrema(x) -> int:
    imax, imin = extrema_indices(x)
    return imax.size + imin.size


def mirror_indices(idx: np.ndarray, length: int, n_mirror: int) -> tuple[np.ndarray, np.ndarray]:
    """Reflect the outermost extrema about both endpoints.

    Returns ``(knots, source)``: virtual knot positions in increasing order and,
    for each knot, the real sample index whose value it carries. The
    ``n_mirror`` extrema nearest index 0 reappear at ``-i`` and those nearest
    ``length - 1`` at ``2 * (length - 1) - i``.
    """
    idx = np.asarray(idx, dtype=np.intp)
    if idx.size == 0:
        return idx.copy(), idx.copy()
    left = idx[: max(n_mirror, 0)][::-1]
    right = idx[idx.size - min(n_mirror, idx.size) :][::-1]
    source = np.concatenate([left, idx, right])
    knots = np.concatenate([-left, idx, 2 * (length - 1) - right])
    return knots, source


def extend_boundaries(series, extrema: ExtremaSet, n_mirror: int = 2) -> ExtremaSet:
    """Augment ``extrema`` with mirror images beyond each end of ``series``."""
    if extrema.count == 0:
        raise InsufficientExtremaError("no extrema to mirror")
    x = np.asarray(series, dtype=np.float64)
    kmax, smax = mirror_indices(extrema.max_idx, x.size, n_mirror)
    kmin, smin = mirror_indices(extrema.min_idx, x.size, n_mirror)
    return ExtremaSet(kmax, x[smax], kmin, x[smin])


def spline_envelope(knot_idx, knot_val, length: int) -> np.ndarray:
    """Interpolate knots and evaluate at ``0 .. length - 1``.

    ``knot_val`` may be 1-d or ``(n_knots, ...)``. Four or more knots give a
    natural cubic spline; three a quadratic; two a straight line.
    """
    knot_idx = np.asarray(knot_idx, dtype=np.float64)
    knot_val = np.asarray(knot_val, dtype=np.float64)
    n = knot_idx.size
    if n < 2:
        raise TooFewKnotsError(f"need at least 2 knots, got {n}")
    if np.any(np.diff(knot_idx) <= 0):
        raise DuplicateKnotIndexError("knot indices must be strictly increasing")
    t = np.arange(length, dtype=np.float64)
    if n >= 4:
        return CubicSpline(knot_idx, knot_val, bc_type="natural", axis=0)(t)
    # Lagrange basis for the 2- and 3-knot cases
    basis = np.ones((length, n))
    for j in range(n):
        for m in range(n):
            if m != j:
                basis[:, j] *= (t - knot_idx[m]) / (knot_idx[j] - knot_idx[m])
    return np.tensordot(basis, knot_val, axes=(1, 0))


def envelopes(series, n_mirror: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Upper and lower spline envelopes of a 1-d signal.

    Raises :class:`InsufficientExtremaError` unless there are at least two
    maxima and two minima.
    """
    x = np.asarray(series, dtype=np.float64)
    imax, imin = extrema_indices(x)
    if imax.size < 2 or imin.size < 2:
        raise InsufficientExtremaError(
            f"{imax.size} maxima / {imin.size} minima; at least 2 of each needed"
        )
    kmax, smax = mirror_indices(imax, x.size, n_mirror)
    kmin, smin = mirror_indices(imin, x.size, n_mirror)
    upper = spline_envelope(kmax, x[smax], x.size)
    lower = spline_envelope(kmin, x[smin], x.size)
    return upper, lower


def envelope_mean_univariate(series, n_mirror: int = 2) -> np.ndarray:
    upper, lower = envelopes(series, n_mirror)
    return (upper + lower) / 2.0
