"""Multivariate EMD and its bivariate / trivariate configurations.

An N-channel record is projected onto K unit directions. For each direction
the sample times of the projection's maxima become spline knots, and one
cubic spline per channel through the record's values at those times gives an
N-dimensional envelope. The envelopes are averaged over directions to form
the local mean that sifting removes. Only maxima are used per direction; a
direction set with antipodal pairs makes the maxima of ``-d`` play the role
of the minima of ``d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import ndtri
from scipy.stats import qmc

from .emd import emd_decompose, sd_criterion, sd_epsilon
from ._kernels import extrema_counts, maxima_envelope_sum
from .envelope import count_extrema, extrema_indices, mirror_indices
from .exceptions import (
    AllDirectionsDegenerateError,
    BadSchemeError,
    DimensionMismatchError,
    TooFewDirectionsError,
    WrongChannelCountError,
)
from .records import (
    DecompositionConfig,
    DirectionScheme,
    ImfSet,
    MultichannelRecord,
    SiftInfo,
    as_record,
)


@dataclass(frozen=True, eq=False)
class DirectionSet:
    vectors: np.ndarray
    scheme: DirectionScheme
    seed: int = 0

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.float64)
        if v.ndim != 2:
            raise DimensionMismatchError(f"direction vectors must be (K, N), got {v.shape}")
        norms = np.linalg.norm(v, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("direction vectors must have unit norm")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "scheme", DirectionScheme(self.scheme))

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def n_channels(self) -> int:
        return self.vectors.shape[1]


def _unit_rows(v):
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def uniform_angles_2d(count: int) -> np.ndarray:
    """Rows ``(cos p_k, sin p_k)`` with ``p_k = 2 k pi / count``, ``k = 1..count``."""
    phi = 2.0 * np.pi * np.arange(1, count + 1) / count
    return np.column_stack([np.cos(phi), np.sin(phi)])


def spherical_grid(n_polar: int, n_azimuth: int) -> np.ndarray:
    """3-vectors on the grid ``theta_k = k pi / n_polar``, ``phi_n = n pi / n_azimuth``.

    ``theta`` is the polar angle from the third axis and ``phi`` the azimuth,
    in the usual spherical convention. Rows are ordered polar-major.
    """
    theta = np.pi * np.arange(1, n_polar + 1) / n_polar
    phi = np.pi * np.arange(1, n_azimuth + 1) / n_azimuth
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    v = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)
    return _unit_rows(v.reshape(-1, 3))


def low_discrepancy_sphere(n_channels: int, count: int, seed: int = 0) -> np.ndarray:
    """Antipodal pairs of near-uniform points on the (N-1)-sphere.

    A scrambled Halton set in the unit cube is pushed through the inverse
    Gaussian CDF and normalised, which maps it to the sphere uniformly. Each
    point is followed by its negation; an odd ``count`` drops the last mirror.
    """
    half = (count + 1) // 2
    u = qmc.Halton(d=n_channels, scramble=True, seed=seed).random(half)
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    base = _unit_rows(ndtri(u))
    pairs = np.empty((2 * half, n_channels))
    pairs[0::2] = base
    pairs[1::2] = -base
    return pairs[:count]


def generate_directions(
    n_channels: int,
    count: int,
    scheme: DirectionScheme | str = DirectionScheme.LOW_DISCREPANCY_SPHERE,
    seed: int = 0,
) -> DirectionSet:
    scheme = DirectionScheme(scheme)
    if n_channels < 2:
        raise DimensionMismatchError("direction sets need at least 2 channels")
    if count < 2 * n_channels:
        raise TooFewDirectionsError(f"{count} directions for {n_channels} channels; need >= {2 * n_channels}")
    if scheme is DirectionScheme.UNIFORM_ANGLES_2D:
        if n_channels != 2:
            raise BadSchemeError("uniform 2-D angles only apply to 2 channels")
        vectors = uniform_angles_2d(count)
    elif scheme is DirectionScheme.SPHERICAL_GRID:
        side = math.isqrt(count)
        if n_channels != 3 or side * side != count:
            raise BadSchemeError("spherical grid needs 3 channels and a square direction count")
        vectors = spherical_grid(side, side)
    else:
        vectors = low_discrepancy_sphere(n_channels, count, seed)
    return DirectionSet(vectors, scheme, seed)


def project(record, direction) -> np.ndarray:
    """Dot product of every sample vector with ``direction``."""
    data = record.data if isinstance(record, MultichannelRecord) else np.atleast_2d(np.asarray(record, dtype=np.float64))
    d = np.asarray(direction, dtype=np.float64)
    if d.ndim != 1 or d.size != data.shape[0]:
        raise DimensionMismatchError(f"direction of length {d.size} for {data.shape[0]} channels")
    return d @ data


def multivariate_envelope_mean(
    data,
    directions: DirectionSet | np.ndarray,
    n_mirror: int = 2,
    envelope_scale: float = 1.0,
) -> tuple[np.ndarray, int]:
    """Average the per-direction maxima envelopes of an ``(N, T)`` block.

    Directions whose projection has fewer than two maxima are skipped and the
    average is taken over the rest; the mean is multiplied by
    ``envelope_scale``. Returns ``(mean, skipped)``.
    """
    x = data.data if isinstance(data, MultichannelRecord) else np.asarray(data, dtype=np.float64)
    vectors = directions.vectors if isinstance(directions, DirectionSet) else np.asarray(directions)
    if vectors.shape[1] != x.shape[0]:
        raise DimensionMismatchError(f"directions are {vectors.shape[1]}-d, record has {x.shape[0]} channels")
    x = np.ascontiguousarray(x, dtype=np.float64)
    projections = np.ascontiguousarray(vectors @ x)
    total, used = maxima_envelope_sum(x, projections, n_mirror)
    if used == 0:
        raise AllDirectionsDegenerateError(f"all {len(projections)} projections have fewer than 2 maxima")
    return envelope_scale * total / used, len(projections) - used


def _multichannel_sd(prev, curr, eps) -> float:
    return float(np.mean([sd_criterion(p, c, e) for p, c, e in zip(prev, curr, eps)]))


def memd_sift_to_imf(
    data,
    directions: DirectionSet,
    config: DecompositionConfig | None = None,
    envelope_scale: float = 1.0,
) -> tuple[np.ndarray, SiftInfo]:
    """Sift an ``(N, T)`` block into one multivariate IMF.

    The stop rule averages the univariate SD over channels. Raises
    :class:`AllDirectionsDegenerateError` if the first sift is impossible.
    """
    config = config or DecompositionConfig()
    h = np.array(data.data if isinstance(data, MultichannelRecord) else data, dtype=np.float64)
    eps = [sd_epsilon(row) for row in h]
    mean, skipped = multivariate_envelope_mean(h, directions, config.n_mirror, envelope_scale)
    h = h - mean
    iterations, sd, worst_skip = 1, None, skipped
    while iterations < config.max_sift_iterations:
        try:
            mean, skipped = multivariate_envelope_mean(h, directions, config.n_mirror, envelope_scale)
        except AllDirectionsDegenerateError:
            break
        nxt = h - mean
        iterations += 1
        worst_skip = max(worst_skip, skipped)
        sd = _multichannel_sd(h, nxt, eps)
        h = nxt
        if sd <= config.sd_threshold:
            return h, SiftInfo(iterations, False, sd, worst_skip)
    return h, SiftInfo(iterations, iterations >= config.max_sift_iterations, sd, worst_skip)


def _exhausted_projections(x, vectors) -> bool:
    return bool(np.all(extrema_counts(np.ascontiguousarray(vectors @ x)) < 3))


def memd_decompose(
    record,
    config: DecompositionConfig | None = None,
    directions: DirectionSet | None = None,
    envelope_scale: float = 1.0,
) -> ImfSet:
    """Decompose a record into IMFs aligned across channels.

    A single channel is handed to :func:`~oscmemd.emd.emd_decompose`.
    Extraction stops when every projection of the residue has fewer than three
    extrema, when no direction can be sifted, or at ``config.max_imfs``.
    """
    config = config or DecompositionConfig()
    record = as_record(record)
    n, t = record.data.shape
    if n == 1:
        return emd_decompose(record, config)
    if directions is None:
        directions = generate_directions(
            n, config.directions_for(n), config.direction_scheme, config.rng_seed
        )
    if directions.n_channels != n:
        raise DimensionMismatchError(f"{directions.n_channels}-d directions for {n} channels")
    residue = record.data.copy()
    imfs, infos = [], []
    while len(imfs) < config.max_imfs:
        if _exhausted_projections(residue, directions.vectors):
            break
        try:
            imf, info = memd_sift_to_imf(residue, directions, config, envelope_scale)
        except AllDirectionsDegenerateError:
            break
        imfs.append(imf)
        infos.append(info)
        residue = residue - imf
    block = np.array(imfs) if imfs else np.zeros((0, n, t))
    return ImfSet(block, residue, record, tuple(infos))


def _complex_envelope_mean(z, rotors, n_mirror, envelope_scale):
    t = z.size
    total = np.zeros(t, dtype=np.complex128)
    used = 0
    for rotor in rotors:
        p = (rotor * z).real
        imax, _ = extrema_indices(p)
        if imax.size < 2:
            continue
        knots, source = mirror_indices(imax, t, n_mirror)
        total += CubicSpline(knots, z[source], bc_type="natural")(np.arange(t))
        used += 1
    if used == 0:
        raise AllDirectionsDegenerateError("all bivariate projections have fewer than 2 maxima")
    return envelope_scale * total / used, len(rotors) - used


def bemd_decompose(
    record,
    config: DecompositionConfig | None = None,
    envelope_scale: float = 1.0,
) -> ImfSet:
    """Bivariate EMD: :func:`memd_decompose` with uniform 2-D angle directions.

    Direction ``k`` of ``K = config.directions_for(2)`` is
    ``(cos phi_k, sin phi_k)``, ``phi_k = 2 k pi / K``.

    ``envelope_scale=2.0`` reproduces the ``2/K`` normalisation sometimes
    printed for this procedure. That factor belongs to formulations that sum
    scalar projection envelopes times ``exp(i phi_k)``; with envelopes that
    interpolate the signal itself it doubles the local mean and sifting
    oscillates instead of converging, so the default is 1.
    """
    config = config or DecompositionConfig()
    record = as_record(record)
    if record.n_channels != 2:
        raise WrongChannelCountError(f"bivariate EMD needs 2 channels, got {record.n_channels}")
    directions = generate_directions(2, config.directions_for(2), DirectionScheme.UNIFORM_ANGLES_2D)
    return memd_decompose(record, config, directions, envelope_scale)


def bemd_complex_decompose(
    record,
    config: DecompositionConfig | None = None,
    envelope_scale: float = 1.0,
) -> ImfSet:
    """Bivariate EMD carried out in complex arithmetic.

    The two channels form ``z = a + i b``; direction ``k`` of ``K`` projects
    with ``Re(exp(-i phi_k) z)``, ``phi_k = 2 k pi / K``, and complex splines
    through ``z`` at the projection maxima give the envelopes. This route
    shares no projection or spline code with :func:`bemd_decompose` and
    serves as its independent check: the two agree to rounding error.
    """
    config = config or DecompositionConfig()
    record = as_record(record)
    if record.n_channels != 2:
        raise WrongChannelCountError(f"bivariate EMD needs 2 channels, got {record.n_channels}")
    k = config.directions_for(2)
    if k < 4:
        raise TooFewDirectionsError(f"{k} directions for 2 channels; need >= 4")
    rotors = np.exp(-1j * 2.0 * np.pi * np.arange(1, k + 1) / k)
    z = record.data[0] + 1j * record.data[1]
    imfs, infos = [], []
    while len(imfs) < config.max_imfs:
        if all(count_extrema((r * z).real) < 3 for r in rotors):
            break
        eps = (sd_epsilon(z.real), sd_epsilon(z.imag))
        try:
            mean, skipped = _complex_envelope_mean(z, rotors, config.n_mirror, envelope_scale)
        except AllDirectionsDegenerateError:
            break
        h = z - mean
        iterations, sd, worst_skip = 1, None, skipped
        exhausted = True
        while iterations < config.max_sift_iterations:
            try:
                mean, skipped = _complex_envelope_mean(h, rotors, config.n_mirror, envelope_scale)
            except AllDirectionsDegenerateError:
                exhausted = False
                break
            nxt = h - mean
            iterations += 1
            worst_skip = max(worst_skip, skipped)
            sd = 0.5 * (sd_criterion(h.real, nxt.real, eps[0]) + sd_criterion(h.imag, nxt.imag, eps[1]))
            h = nxt
            if sd <= config.sd_threshold:
                exhausted = False
                break
        exhausted = exhausted and iterations >= config.max_sift_iterations
        imfs.append(np.vstack([h.real, h.imag]))
        infos.append(SiftInfo(iterations, exhausted, sd, worst_skip))
        z = z - h
    t = record.n_samples
    block = np.array(imfs) if imfs else np.zeros((0, 2, t))
    return ImfSet(block, np.vstack([z.real, z.imag]), record, tuple(infos))


def temd_decompose(
    record,
    config: DecompositionConfig | None = None,
    n_polar: int = 8,
    n_azimuth: int = 8,
) -> ImfSet:
    """Trivariate EMD: multivariate sifting over a polar/azimuth direction grid."""
    config = config or DecompositionConfig()
    record = as_record(record)
    if record.n_channels != 3:
        raise WrongChannelCountError(f"trivariate EMD needs 3 channels, got {record.n_channels}")
    directions = DirectionSet(spherical_grid(n_polar, n_azimuth), DirectionScheme.SPHERICAL_GRID)
    return memd_decompose(record, config, directions)
