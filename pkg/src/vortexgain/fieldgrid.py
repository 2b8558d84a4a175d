"""Transverse-plane grids, pump-beam synthesis, and complex-field algebra.

Internal units: lengths in beam waists (w = 1), Rabi frequencies and
detunings in units of the Raman-level decay rate, propagation distances in
units of the characteristic gain length. A beam of strength s, winding l
and waist w samples

    s * (r/w)**|l| * exp(-r**2/w**2) * exp(1j*l*phi)

on an endpoint-inclusive square grid covering [-half_extent, +half_extent]
along both axes. All operations here are pure functions over immutable
fields and may be evaluated sample-parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GridMismatchError


@dataclass(frozen=True)
class GridSpec:
    """Uniform transverse sampling grid, symmetric about the beam axis.

    Sample (ix, iy) sits at x = -half_extent + ix*dx, y = -half_extent + iy*dy
    with dx = 2*half_extent/(nx-1); the index/coordinate map is invertible.
    """

    nx: int = 512
    ny: int = 512
    half_extent: float = 4.0

    def __post_init__(self) -> None:
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"grid needs >= 2 samples per axis, got {self.nx}x{self.ny}")
        if not self.half_extent > 0:
            raise ValueError(f"half_extent must be positive, got {self.half_extent}")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_extent / (self.nx - 1)

    @property
    def dy(self) -> float:
        return 2.0 * self.half_extent / (self.ny - 1)

    @property
    def shape(self) -> tuple[int, int]:
        """Array shape (ny, nx); x varies along the last axis."""
        return (self.ny, self.nx)

    def xs(self) -> np.ndarray:
        return _axis_coords(self.nx, self.half_extent)

    def ys(self) -> np.ndarray:
        return _axis_coords(self.ny, self.half_extent)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(xx, yy) coordinate arrays of shape (ny, nx)."""
        return _mesh(self)

    def polar(self) -> tuple[np.ndarray, np.ndarray]:
        """(r, phi) arrays of shape (ny, nx); phi = atan2(y, x)."""
        return _polar(self)


@lru_cache(maxsize=32)
def _axis_coords(n: int, half_extent: float) -> np.ndarray:
    step = 2.0 * half_extent / (n - 1)
    coords = -half_extent + step * np.arange(n, dtype=np.float64)
    coords.setflags(write=False)
    return coords


@lru_cache(maxsize=32)
def _mesh(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    xx, yy = np.meshgrid(grid.xs(), grid.ys(), indexing="xy")
    xx.setflags(write=False)
    yy.setflags(write=False)
    return xx, yy


@lru_cache(maxsize=32)
def _polar(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    xx, yy = _mesh(grid)
    r = np.hypot(xx, yy)
    phi = np.arctan2(yy, xx)
    r.setflags(write=False)
    phi.setflags(write=False)
    return r, phi


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex amplitudes sampled on a GridSpec; values[iy, ix] at (x[ix], y[iy]).

    Instances are immutable (the array is marked read-only) and every
    constructed field is guaranteed free of NaN/Inf samples.
    """

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.ascontiguousarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        if not np.isfinite(v).all():
            raise ValueError("field contains non-finite samples")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    def conjugate(self) -> "ComplexField":
        return ComplexField(self.grid, np.conj(self.values))


@dataclass(frozen=True)
class PhaseMap:
    """Principal-argument map in (-pi, pi]; zero-amplitude samples carry
    phase 0 and are flagged in ``zero_samples``."""

    field: ComplexField
    zero_samples: np.ndarray


@dataclass(frozen=True)
class BeamSpec:
    """One pump beam: strength (peak Rabi frequency), signed integer winding,
    waist, and optionally a radial order decoupled from the winding.

    ``radial_order`` defaults to |winding|, the usual doughnut profile. A
    non-default value lets a beam carry, say, a flat phase on a doughnut
    amplitude, which the matched doublet configuration requires.
    """

    strength: float
    winding: int = 0
    waist: float = 1.0
    radial_order: int | None = None

    def __post_init__(self) -> None:
        if not self.strength >= 0:
            raise ValueError(f"beam strength must be >= 0, got {self.strength}")
        if not self.waist > 0:
            raise ValueError(f"beam waist must be positive, got {self.waist}")
        if int(self.winding) != self.winding:
            raise ValueError(f"winding must be an integer, got {self.winding}")
        if self.radial_order is not None and self.radial_order < 0:
            raise ValueError(f"radial_order must be >= 0, got {self.radial_order}")

    @property
    def profile_order(self) -> int:
        return abs(self.winding) if self.radial_order is None else self.radial_order


def envelope(spec: BeamSpec, r: np.ndarray | float) -> np.ndarray | float:
    """Real radial amplitude s*(r/w)**p * exp(-r^2/w^2); exactly 0 at r=0 for p>0."""
    u = np.asarray(r, dtype=np.float64) / spec.waist
    out = spec.strength * u**spec.profile_order * np.exp(-(u * u))
    if np.ndim(r) == 0:
        return float(out)
    return out


def make_beam(spec: BeamSpec, grid: GridSpec) -> ComplexField:
    """Sample the beam amplitude envelope(r)*exp(1j*l*phi) on the grid."""
    r, phi = grid.polar()
    values = envelope(spec, r) * np.exp(1j * spec.winding * phi)
    return ComplexField(grid, values)


def uniform_field(grid: GridSpec, value: complex = 1.0 + 0.0j) -> ComplexField:
    return ComplexField(grid, np.full(grid.shape, value, dtype=np.complex128))


def require_same_grid(*fields: ComplexField) -> GridSpec:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise GridMismatchError(f"fields live on different grids: {f.grid} vs {grid}")
    return grid


def total_strength(fields: list[ComplexField]) -> ComplexField:
    """Pointwise root-sum-square magnitude of the given fields (real-valued)."""
    if not fields:
        raise ValueError("total_strength requires at least one field")
    grid = require_same_grid(*fields)
    acc = np.zeros(grid.shape, dtype=np.float64)
    for f in fields:
        acc += f.intensity()
    return ComplexField(grid, np.sqrt(acc).astype(np.complex128))


def phase_map(field: ComplexField) -> PhaseMap:
    """Pointwise principal argument; |value| = 0 samples are pinned to phase 0."""
    zero = field.values == 0
    phases = np.angle(field.values)
    phases[zero] = 0.0
    return PhaseMap(ComplexField(field.grid, phases.astype(np.complex128)), zero)


def bilinear_sample(field: ComplexField, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Bilinear interpolation of the field at arbitrary in-grid points."""
    g = field.grid
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if np.any(np.abs(x) > g.half_extent) or np.any(np.abs(y) > g.half_extent):
        raise ValueError("sample point outside the grid extent")
    fx = (x + g.half_extent) / g.dx
    fy = (y + g.half_extent) / g.dy
    ix = np.clip(np.floor(fx).astype(np.intp), 0, g.nx - 2)
    iy = np.clip(np.floor(fy).astype(np.intp), 0, g.ny - 2)
    tx = fx - ix
    ty = fy - iy
    v = field.values
    return (
        v[iy, ix] * (1 - tx) * (1 - ty)
        + v[iy, ix + 1] * tx * (1 - ty)
        + v[iy + 1, ix] * (1 - tx) * ty
        + v[iy + 1, ix + 1] * tx * ty
    )
