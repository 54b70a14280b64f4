"""Sampling grids, indicator maps, and the direct-sampling indicator functions.

The four indicators share one correlation kernel: the measured far-field row
against the steering vector e^{-ik theta_n . x}.  All returned maps are
normalized to max 1 (zero maps are flagged instead of divided).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InputMismatchError

_ZERO_MAP_EPS = 1e-300
_CHUNK = 4096  # grid points per correlation block, keeps phase matrices small


@dataclass(frozen=True)
class ImagingGrid:
    """Rectangular sampling region, points enumerated row-major (y rows, x fast)."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise DomainError("grid bounds must satisfy min < max")
        if self.nx < 2 or self.ny < 2:
            raise DomainError("grid needs nx, ny >= 2")

    @property
    def shape(self):
        return (self.ny, self.nx)

    def x_coords(self):
        return np.linspace(self.x_min, self.x_max, self.nx)

    def y_coords(self):
        return np.linspace(self.y_min, self.y_max, self.ny)

    def points(self):
        """(ny*nx, 2) array, row-major with x varying fastest."""
        xx, yy = np.meshgrid(self.x_coords(), self.y_coords())
        return np.column_stack([xx.ravel(), yy.ravel()])

    def spacing(self):
        return ((self.x_max - self.x_min) / (self.nx - 1),
                (self.y_max - self.y_min) / (self.ny - 1))


@dataclass
class IndicatorMap:
    """Normalized real-valued map over an ImagingGrid, values in [0, 1]."""

    grid: ImagingGrid
    values: np.ndarray
    zero_map: bool = False

    @classmethod
    def from_raw(cls, grid, raw):
        raw = np.asarray(raw, dtype=float).reshape(grid.shape)
        peak = raw.max()
        if peak < _ZERO_MAP_EPS:
            return cls(grid, np.zeros(grid.shape), zero_map=True)
        return cls(grid, raw / peak)

    def value_at_index(self, iy, ix):
        return float(self.values[iy, ix])

    def argmax_point(self):
        iy, ix = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return np.array([self.grid.x_coords()[ix], self.grid.y_coords()[iy]])


@dataclass(frozen=True)
class Peak:
    position: tuple
    value: float


@dataclass
class PeakReport:
    """Local maxima sorted by value, plus optional per-crack hit metrics."""

    peaks: list
    crack_matches: list = field(default_factory=list)  # (center, dist, value)


def observation_angles(n_obs):
    """Angles 2*pi*n/N for n = 1..N."""
    return 2.0 * np.pi * np.arange(1, n_obs + 1) / n_obs


def observation_directions(n_obs):
    ang = observation_angles(n_obs)
    return np.column_stack([np.cos(ang), np.sin(ang)])


def steering_vector(k, n_obs, x):
    """Test-function samples e^{-ik theta_n . x}, unit modulus each."""
    if n_obs < 1:
        raise DomainError("need at least one observation direction")
    x = np.asarray(x, dtype=float)
    return np.exp(-1j * k * observation_directions(n_obs) @ x)


def correlate(data, steer):
    """Discrete inner product sum_n data_n * conj(steer_n)."""
    data = np.asarray(data)
    steer = np.asarray(steer)
    if data.shape != steer.shape:
        raise InputMismatchError(f"length mismatch {data.shape} vs {steer.shape}")
    return complex(np.sum(data * np.conj(steer)))


def _correlation_blocks(data_row, k, grid):
    """Yield (slice, corr) with corr_x = <data, steer(x)> over grid chunks."""
    pts = grid.points()
    dirs = observation_directions(data_row.size)
    for start in range(0, pts.shape[0], _CHUNK):
        block = pts[start:start + _CHUNK]
        phase = np.exp(1j * k * (block @ dirs.T))
        yield slice(start, start + block.shape[0]), phase @ data_row


def _correlation_map(data_row, k, grid):
    out = np.empty(grid.nx * grid.ny, dtype=complex)
    for sl, corr in _correlation_blocks(data_row, k, grid):
        out[sl] = corr
    return out


def _check_indices(tensor, f_index, l_index=None):
    F, L, N = tensor.values.shape
    if not 0 <= f_index < F:
        raise InputMismatchError(f"frequency index {f_index} out of range (F={F})")
    if l_index is not None and not 0 <= l_index < L:
        raise InputMismatchError(f"incident index {l_index} out of range (L={L})")


def indicator_single(tensor, f_index, l_index, grid):
    """Classical single-direction indicator: normalized steering correlation."""
    _check_indices(tensor, f_index, l_index)
    row = tensor.values[f_index, l_index]
    k = tensor.config.wavenumbers[f_index]
    norm = np.linalg.norm(row) * math.sqrt(row.size)
    if norm < _ZERO_MAP_EPS:
        return IndicatorMap(grid, np.zeros(grid.shape), zero_map=True)
    raw = np.abs(_correlation_map(row, k, grid)) / norm
    return IndicatorMap.from_raw(grid, raw)


def indicator_if(tensor, f_index, grid):
    """Pointwise maximum of the per-direction indicators, renormalized."""
    _check_indices(tensor, f_index)
    L = tensor.values.shape[1]
    if L < 1:
        raise InputMismatchError("need at least one incident direction")
    stack = np.stack([indicator_single(tensor, f_index, l, grid).values
                      for l in range(L)])
    return IndicatorMap.from_raw(grid, stack.max(axis=0))


def indicator_aif(tensor, f_index, grid):
    """Phase-compensated sum over incident directions (improving factor)."""
    _check_indices(tensor, f_index)
    k = tensor.config.wavenumbers[f_index]
    pts = grid.points()
    total = np.zeros(pts.shape[0], dtype=complex)
    for l, ang in enumerate(tensor.config.incident_angles):
        d = np.array([math.cos(ang), math.sin(ang)])
        corr = _correlation_map(tensor.values[f_index, l], k, grid)
        total += np.exp(-1j * k * pts @ d) * corr
    return IndicatorMap.from_raw(grid, np.abs(total))


def indicator_mif(tensor, grid):
    """Multi-frequency indicator; needs F >= 2 and a single incident direction."""
    F, L, _ = tensor.values.shape
    if F < 2:
        raise InputMismatchError("multi-frequency indicator needs F >= 2")
    if L != 1:
        raise InputMismatchError("multi-frequency indicator expects a single incident direction")
    ang = tensor.config.incident_angles[0]
    d = np.array([math.cos(ang), math.sin(ang)])
    pts = grid.points()
    total = np.zeros(pts.shape[0], dtype=complex)
    for f, k in enumerate(tensor.config.wavenumbers):
        corr = _correlation_map(tensor.values[f, 0], k, grid)
        total += np.exp(-1j * k * pts @ d) * corr
    return IndicatorMap.from_raw(grid, np.abs(total))


def find_local_maxima(imap, min_separation, floor=0.0, scene=None):
    """Strict grid-local maxima above floor, greedily pruned by separation.

    Ties break toward the lexicographically smaller grid index.  When a scene
    is given, the report carries each crack's nearest-peak distance and value.
    """
    if min_separation <= 0.0:
        raise DomainError("min_separation must be positive")
    v = imap.values
    ny, nx = v.shape
    padded = np.full((ny + 2, nx + 2), -np.inf)
    padded[1:-1, 1:-1] = v
    strict = np.ones((ny, nx), dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            strict &= v > padded[1 + dy:1 + dy + ny, 1 + dx:1 + dx + nx]
    iy, ix = np.nonzero(strict & (v >= floor))
    xs, ys = imap.grid.x_coords(), imap.grid.y_coords()
    cand = sorted(zip(iy.tolist(), ix.tolist()), key=lambda p: (-v[p[0], p[1]], p[0], p[1]))
    kept = []
    for gy, gx in cand:
        p = np.array([xs[gx], ys[gy]])
        if all(np.linalg.norm(p - np.asarray(q.position)) >= min_separation for q in kept):
            kept.append(Peak((float(p[0]), float(p[1])), float(v[gy, gx])))
    report = PeakReport(peaks=kept)
    if scene is not None:
        for crack in scene.cracks:
            c = np.asarray(crack.center)
            if kept:
                dists = [np.linalg.norm(c - np.asarray(q.position)) for q in kept]
                j = int(np.argmin(dists))
                report.crack_matches.append((crack.center, float(dists[j]), kept[j].value))
            else:
                report.crack_matches.append((crack.center, math.inf, 0.0))
    return report


def map_distance(a, b):
    """(max, root-mean-square) of pointwise differences; grids must match."""
    if a.grid != b.grid:
        raise InputMismatchError("maps live on different grids")
    diff = np.abs(a.values - b.values)
    return float(diff.max()), float(np.sqrt(np.mean(diff**2)))
