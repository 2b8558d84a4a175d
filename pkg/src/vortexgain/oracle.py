"""Independent numerical verification of the closed-form propagators.

Two layers of cross-checking:

* fixed-step RK4 integration of the raw coupled probe equations (the
  eliminated linear system, before any superposition-mode algebra), per
  transverse sample, for both schemes;
* an exact solve of the stationary atomic-amplitude system, fed into the
  probe equations at every RK4 stage, which keeps the probe back-coupling
  the eliminated forms drop and so quantifies the elimination error.

Per-sample integrations are independent; the hot loops live in
``_kernels`` with numba and numpy backends.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .doublet import DoubletParams, _beam_arrays
from .errors import ConvergenceWarning, StationarySolveError
from .fieldgrid import ComplexField, GridSpec, envelope, require_same_grid
from .singlet import SingletParams, pump_envelopes


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step classical RK4 over [0, z].

    ``z`` of None means the target distance comes from the params. With
    ``check_convergence`` the run is repeated at half the steps and a
    warning is issued when the two outputs differ by more than 1e-6
    relative (the step count is too small).
    """

    steps: int = 1000
    z: float | None = None
    check_convergence: bool = False

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")


@dataclass(frozen=True)
class AtomicAmplitudes:
    """Stationary amplitudes in units of the root atomic density; phi_r is
    held constant (undepleted ground level)."""

    phi_r: complex
    phi_y: complex
    phi_u1: complex
    phi_u2: complex


def _target_z(params, cfg: IntegratorConfig) -> float:
    return params.z if cfg.z is None else cfg.z


def _singlet_coefficients(params: SingletParams, grid: GridSpec):
    e1, e2, _, phi = pump_envelopes(params, grid)
    q = 1j / (params.delta_1f**2 * (params.delta_2f + 1j))
    cross = e1 * e2 * np.exp(1j * (params.beam1.winding - params.beam2.winding) * phi)
    return q * e1 * e1, q * cross, q * np.conj(cross), q * e2 * e2


def _doublet_coefficients(params: DoubletParams, grid: GridSpec):
    (e11, e12, e21, e22), (ph11, ph12, ph21, ph22) = _beam_arrays(params, grid)
    q1 = 1j / (params.delta_1f**2 * (params.delta_2f + params.delta + 1j))
    q2 = 1j / (params.delta_1f**2 * (params.delta_2f - params.delta + 1j))
    cross1 = e11 * e21 * ph11 * np.conj(ph21)
    cross2 = e12 * e22 * ph12 * np.conj(ph22)
    a11 = q1 * e11 * e11 + q2 * e12 * e12
    a12 = q1 * cross1 + q2 * cross2
    a21 = q1 * np.conj(cross1) + q2 * np.conj(cross2)
    a22 = q1 * e21 * e21 + q2 * e22 * e22
    return a11, a12, a21, a22


def _integrate_linear(coeffs, p1, p2, z, cfg, backend):
    a11, a12, a21, a22 = coeffs
    grid = p1.grid
    q1, q2 = _kernels.rk4_linear(a11, a12, a21, a22, p1.values, p2.values, z, cfg.steps, backend)
    if cfg.check_convergence and cfg.steps >= 2:
        h1, h2 = _kernels.rk4_linear(
            a11, a12, a21, a22, p1.values, p2.values, z, cfg.steps // 2, backend
        )
        scale = max(np.abs(q1).max(), np.abs(q2).max(), 1e-300)
        gap = max(np.abs(q1 - h1).max(), np.abs(q2 - h2).max()) / scale
        if gap > 1e-6:
            warnings.warn(
                f"step halving changed the output by {gap:.3g} relative; "
                f"steps={cfg.steps} is too coarse for this parameter set",
                ConvergenceWarning,
                stacklevel=3,
            )
    return ComplexField(grid, q1), ComplexField(grid, q2)


def integrate_singlet(
    p1_0: ComplexField,
    p2_0: ComplexField,
    params: SingletParams,
    cfg: IntegratorConfig = IntegratorConfig(),
    backend: str | None = None,
) -> tuple[ComplexField, ComplexField]:
    """RK4 integration of the coupled singlet probe equations, sample by sample."""
    grid = require_same_grid(p1_0, p2_0)
    return _integrate_linear(
        _singlet_coefficients(params, grid), p1_0, p2_0, _target_z(params, cfg), cfg, backend
    )


def integrate_doublet(
    p1_0: ComplexField,
    p2_0: ComplexField,
    params: DoubletParams,
    cfg: IntegratorConfig = IntegratorConfig(),
    backend: str | None = None,
) -> tuple[ComplexField, ComplexField]:
    """RK4 integration of the coupled doublet probe equations (two gain lines)."""
    grid = require_same_grid(p1_0, p2_0)
    return _integrate_linear(
        _doublet_coefficients(params, grid), p1_0, p2_0, _target_z(params, cfg), cfg, backend
    )


def solve_stationary_atoms(
    p1: complex,
    p2: complex,
    params: SingletParams,
    phi_r: complex = 1.0 + 0.0j,
    r: float = 0.0,
    phi: float = 0.0,
) -> AtomicAmplitudes:
    """Exact stationary atomic amplitudes at one transverse point.

    ``p1``/``p2`` are the dimensionless probe couplings (probe Rabi
    frequency times the light-matter coupling, in decay-rate units). The
    3x3 linear system in (phi_u1, phi_u2, phi_y) is arrow-structured and
    solved by exact elimination; the residual is verified below 1e-12
    relative before returning.
    """
    c1 = envelope(params.beam1, r) * np.exp(1j * params.beam1.winding * phi) * phi_r
    c2 = envelope(params.beam2, r) * np.exp(1j * params.beam2.winding * phi) * phi_r
    d1f = params.delta_1f
    dy = params.delta_2f - 1j
    coupling_sq = abs(p1) ** 2 + abs(p2) ** 2
    denom = d1f * dy - coupling_sq
    scale = max(abs(d1f * dy), coupling_sq)
    if abs(denom) < 1e-12 * scale:
        raise StationarySolveError(
            f"stationary system is singular: |delta_1f*(delta_2f - i) - |p|^2| = "
            f"{abs(denom):.3g} against scale {scale:.3g} "
            f"(condition ~ {scale / max(abs(denom), 1e-300):.3g})"
        )
    phi_y = (np.conj(p1) * c1 + np.conj(p2) * c2) / denom
    phi_u1 = (c1 + p1 * phi_y) / d1f
    phi_u2 = (c2 + p2 * phi_y) / d1f

    res1 = d1f * phi_u1 - p1 * phi_y - c1
    res2 = d1f * phi_u2 - p2 * phi_y - c2
    res3 = dy * phi_y - np.conj(p1) * phi_u1 - np.conj(p2) * phi_u2
    res_scale = max(
        abs(c1), abs(c2), abs(d1f * phi_u1), abs(d1f * phi_u2), abs(dy * phi_y), 1e-300
    )
    residual = max(abs(res1), abs(res2), abs(res3)) / res_scale
    if residual > 1e-12:
        raise StationarySolveError(f"stationary solve residual {residual:.3g} exceeds 1e-12")
    return AtomicAmplitudes(
        phi_r=complex(phi_r), phi_y=complex(phi_y), phi_u1=complex(phi_u1), phi_u2=complex(phi_u2)
    )


def subsample(field: ComplexField, stride: int) -> ComplexField:
    """Every stride-th sample per axis; stride must divide nx-1 and ny-1 so
    the decimated grid keeps the symmetric extent."""
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    if stride == 1:
        return field
    g = field.grid
    if (g.nx - 1) % stride or (g.ny - 1) % stride:
        raise ValueError(
            f"stride {stride} does not divide nx-1={g.nx - 1} and ny-1={g.ny - 1}; "
            "choose a grid with nx = k*stride + 1 samples or stride 1"
        )
    sub = GridSpec(1 + (g.nx - 1) // stride, 1 + (g.ny - 1) // stride, g.half_extent)
    return ComplexField(sub, field.values[::stride, ::stride])


def integrate_exact_singlet(
    p1_0: ComplexField,
    p2_0: ComplexField,
    params: SingletParams,
    cfg: IntegratorConfig = IntegratorConfig(),
    probe_coupling: float = 1e-2,
    stride: int = 8,
    backend: str | None = None,
) -> tuple[ComplexField, ComplexField]:
    """RK4 with the stationary atomic system solved exactly at every stage.

    ``probe_coupling`` scales the input profiles to physical probe
    couplings (weak-probe regime for small values); outputs are scaled
    back, so in the vanishing-coupling, large-detuning limit they approach
    the eliminated closed forms. Runs on a stride-decimated grid by
    default since every stage performs a 3x3 solve per sample; pass
    stride 1 for the full grid.
    """
    require_same_grid(p1_0, p2_0)
    if not probe_coupling > 0:
        raise ValueError(f"probe_coupling must be positive, got {probe_coupling}")
    p1 = subsample(p1_0, stride)
    p2 = subsample(p2_0, stride)
    grid = p1.grid
    r, phi = grid.polar()
    c1 = envelope(params.beam1, r) * np.exp(1j * params.beam1.winding * phi)
    c2 = envelope(params.beam2, r) * np.exp(1j * params.beam2.winding * phi)
    u1 = probe_coupling * p1.values
    u2 = probe_coupling * p2.values
    q1, q2 = _kernels.rk4_raman_exact(
        c1, c2, u1, u2, params.delta_1f, params.delta_2f, _target_z(params, cfg), cfg.steps, backend
    )
    if not (np.isfinite(q1).all() and np.isfinite(q2).all()):
        raise StationarySolveError(
            "exact integration produced non-finite samples; the stationary system "
            "passed near a singularity for this probe coupling"
        )
    return (
        ComplexField(grid, q1 / probe_coupling),
        ComplexField(grid, q2 / probe_coupling),
    )
