"""Containers for uniformly sampled multichannel signals and their IMFs.

Samples live in read-only float64 arrays. A :class:`MultichannelRecord`
stores its channels as one ``(N, T)`` block; an :class:`ImfSet` stores IMFs
as an ``(M, N, T)`` block so that IMF ``m`` of channel ``n`` is
``imfs[m, n]``. Time is implicit: sample ``k`` sits at ``t0 + k / sample_rate``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import (
    LengthMismatchError,
    NonFiniteError,
    RateInvalidError,
    TooShortError,
)

MIN_LENGTH = 4


def _frozen_array(values, ndim):
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != ndim:
        raise LengthMismatchError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _check_rate(sample_rate):
    rate = float(sample_rate)
    if not np.isfinite(rate) or rate <= 0:
        raise RateInvalidError(f"sample_rate must be a positive finite number, got {sample_rate!r}")
    return rate


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """One uniformly sampled real channel."""

    samples: np.ndarray
    sample_rate: float
    t0: float = 0.0

    def __post_init__(self):
        samples = _frozen_array(self.samples, 1)
        if samples.size < MIN_LENGTH:
            raise TooShortError(f"need at least {MIN_LENGTH} samples, got {samples.size}")
        if not np.all(np.isfinite(samples)):
            bad = int(np.flatnonzero(~np.isfinite(samples))[0])
            raise NonFiniteError(f"non-finite sample at index {bad}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", _check_rate(self.sample_rate))
        object.__setattr__(self, "t0", float(self.t0))

    def __len__(self):
        return self.samples.size

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.samples
        return self.samples.astype(dtype)

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate

    @property
    def time(self) -> np.ndarray:
        return self.t0 + np.arange(self.samples.size) / self.sample_rate


@dataclass(frozen=True, eq=False)
class MultichannelRecord:
    """N time-aligned channels sharing one sample rate.

    Build these with :func:`build_record`, which checks ragged input before
    stacking; the constructor expects an already rectangular ``(N, T)`` array.
    """

    data: np.ndarray
    sample_rate: float
    channel_ids: tuple = ()
    t0: float = 0.0

    def __post_init__(self):
        data = _frozen_array(self.data, 2)
        n, t = data.shape
        if n < 1:
            raise LengthMismatchError("a record needs at least one channel")
        if t < MIN_LENGTH:
            raise TooShortError(f"need at least {MIN_LENGTH} samples per channel, got {t}")
        finite = np.isfinite(data)
        if not finite.all():
            ch, k = np.argwhere(~finite)[0]
            raise NonFiniteError(f"non-finite sample in channel {ch} at index {k}")
        ids = tuple(self.channel_ids) if self.channel_ids else tuple(f"ch{i + 1}" for i in range(n))
        if len(ids) != n:
            raise LengthMismatchError(f"{len(ids)} channel ids for {n} channels")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "sample_rate", _check_rate(self.sample_rate))
        object.__setattr__(self, "channel_ids", ids)
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> tuple[TimeSeries, ...]:
        return tuple(TimeSeries(row, self.sample_rate, self.t0) for row in self.data)

    @property
    def time(self) -> np.ndarray:
        return self.t0 + np.arange(self.n_samples) / self.sample_rate

    def segment(self, start: float, stop: float) -> "MultichannelRecord":
        """Sub-record covering times ``start <= t < stop`` (seconds)."""
        t = self.time
        keep = (t >= start) & (t < stop)
        idx = np.flatnonzero(keep)
        if idx.size == 0:
            raise TooShortError(f"no samples in [{start}, {stop})")
        return MultichannelRecord(
            self.data[:, idx], self.sample_rate, self.channel_ids, float(t[idx[0]])
        )


def build_record(
    channels: Sequence[Sequence[float]],
    sample_rate: float,
    ids: Sequence[str] | None = None,
    t0: float = 0.0,
) -> MultichannelRecord:
    """Validate raw channel sequences and stack them into a record.

    Raises
    ------
    LengthMismatchError
        Channels of different lengths, or ids not matching the channel count.
    NonFiniteError
        Any NaN or infinite sample.
    RateInvalidError
        ``sample_rate <= 0``.
    """
    rows = [np.asarray(c, dtype=np.float64) for c in channels]
    if not rows:
        raise LengthMismatchError("at least one channel is required")
    lengths = {r.shape for r in rows}
    if len(lengths) != 1 or rows[0].ndim != 1:
        raise LengthMismatchError(f"channels have different shapes: {sorted(lengths)}")
    _check_rate(sample_rate)
    return MultichannelRecord(np.vstack(rows), sample_rate, tuple(ids) if ids is not None else (), t0)


def as_record(signal, sample_rate: float | None = None) -> MultichannelRecord:
    """Coerce a record, a TimeSeries, or a 1-d/2-d array into a record."""
    if isinstance(signal, MultichannelRecord):
        return signal
    if isinstance(signal, TimeSeries):
        return MultichannelRecord(signal.samples[None, :], signal.sample_rate, (), signal.t0)
    arr = np.asarray(signal, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    return MultichannelRecord(arr, 1.0 if sample_rate is None else sample_rate)


class BoundaryPolicy(enum.Enum):
    MIRROR_EXTREMA = "mirror_extrema"


class DirectionScheme(enum.Enum):
    UNIFORM_ANGLES_2D = "uniform_angles_2d"
    LOW_DISCREPANCY_SPHERE = "low_discrepancy_sphere"
    SPHERICAL_GRID = "spherical_grid"


@dataclass(frozen=True)
class DecompositionConfig:
    """Knobs shared by the univariate and multivariate decompositions.

    ``direction_count=None`` means ``max(64, 8 * N)`` for an N-channel record.
    """

    sd_threshold: float = 0.2
    direction_count: int | None = None
    max_sift_iterations: int = 10
    max_imfs: int = 16
    boundary_policy: BoundaryPolicy = BoundaryPolicy.MIRROR_EXTREMA
    n_mirror: int = 2
    rng_seed: int = 0
    direction_scheme: DirectionScheme = DirectionScheme.LOW_DISCREPANCY_SPHERE

    def __post_init__(self):
        if not (self.sd_threshold > 0):
            raise ValueError(f"sd_threshold must be positive, got {self.sd_threshold}")
        if self.max_sift_iterations < 1:
            raise ValueError("max_sift_iterations must be >= 1")
        if self.max_imfs < 1:
            raise ValueError("max_imfs must be >= 1")
        if self.n_mirror < 1:
            raise ValueError("n_mirror must be >= 1")
        if self.direction_count is not None and self.direction_count < 1:
            raise ValueError("direction_count must be positive")
        object.__setattr__(self, "boundary_policy", BoundaryPolicy(self.boundary_policy))
        object.__setattr__(self, "direction_scheme", DirectionScheme(self.direction_scheme))

    def directions_for(self, n_channels: int) -> int:
        if self.direction_count is None:
            return max(64, 8 * n_channels)
        return self.direction_count


@dataclass(frozen=True)
class SiftInfo:
    """How the sifting of one IMF ended."""

    iterations: int
    exhausted: bool
    last_sd: float | None
    skipped_directions: int = 0


@dataclass(frozen=True, eq=False)
class ImfSet:
    """Aligned IMFs of every channel plus the per-channel residue."""

    imfs: np.ndarray
    residue: np.ndarray
    source: MultichannelRecord
    sift_info: tuple[SiftInfo, ...] = field(default=())

    def __post_init__(self):
        imfs = np.array(self.imfs, dtype=np.float64)
        residue = _frozen_array(self.residue, 2)
        n, t = self.source.data.shape
        if imfs.size == 0:
            imfs = np.zeros((0, n, t))
        if imfs.ndim != 3 or imfs.shape[1:] != (n, t) or residue.shape != (n, t):
            raise LengthMismatchError(
                f"IMF block {imfs.shape} / residue {residue.shape} do not match record {(n, t)}"
            )
        imfs.setflags(write=False)
        object.__setattr__(self, "imfs", imfs)
        object.__setattr__(self, "residue", residue)
        object.__setattr__(self, "sift_info", tuple(self.sift_info))

    @property
    def n_imfs(self) -> int:
        return self.imfs.shape[0]

    @property
    def n_channels(self) -> int:
        return self.imfs.shape[1]

    @property
    def sample_rate(self) -> float:
        return self.source.sample_rate

    def imf(self, m: int, n: int) -> TimeSeries:
        return TimeSeries(self.imfs[m, n], self.source.sample_rate, self.source.t0)


def reconstruct(imf_set: ImfSet) -> MultichannelRecord:
    """Sum every IMF and the residue back into a record."""
    total = imf_set.residue + imf_set.imfs.sum(axis=0)
    src = imf_set.source
    return MultichannelRecord(total, src.sample_rate, src.channel_ids, src.t0)
