"""The double-Raman doublet scheme: four pumps, two gain lines split by 2*delta.

Each probe couples to two pump beams, one per gain line. When the two lines
carry pointwise-proportional pump patterns (the matching condition), the
probe pair again splits into one interacting and one free superposition
mode, now with a two-line growth rate. Unlike the singlet, the sub- or
superluminal response survives at zero two-photon detuning, controlled by
the line splitting delta alone.

Beam indexing: beams = (c11, c12, c21, c22) where the first index is the
probe the beam couples to and the second the gain line it belongs to.
Grouped strengths pair beams by LINE: E_g1 from (c11, c21), E_g2 from
(c12, c22).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    AdiabaticityWarning,
    IndeterminateMatchingError,
    MatchingError,
    SingularTransformError,
)
from .fieldgrid import BeamSpec, ComplexField, GridSpec, envelope, require_same_grid, uniform_field
from .singlet import ModePair

MATCHING_RTOL = 1e-8


@dataclass(frozen=True)
class DoubletParams:
    """Parameter set for the doublet scheme.

    ``delta`` is half the pump-frequency splitting between the two gain
    lines; ``delta_1f``/``delta_2f`` are the line-averaged one- and
    two-photon detunings. Small ``delta`` formally violates the
    rotating-wave separation of the two lines; no guard is imposed beyond
    this note.
    """

    beams: tuple[BeamSpec, BeamSpec, BeamSpec, BeamSpec]
    delta: float = 4.0
    delta_1f: float = 1.0
    delta_2f: float = 0.0
    z: float = 1.0
    gain_scale: float = 1.0

    def __post_init__(self) -> None:
        if len(self.beams) != 4:
            raise ValueError("doublet needs exactly four pump beams (c11, c12, c21, c22)")
        if self.delta_1f == 0:
            raise ValueError("delta_1f must be nonzero")
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")

    @property
    def c11(self) -> BeamSpec:
        return self.beams[0]

    @property
    def c12(self) -> BeamSpec:
        return self.beams[1]

    @property
    def c21(self) -> BeamSpec:
        return self.beams[2]

    @property
    def c22(self) -> BeamSpec:
        return self.beams[3]


def default_doublet_params(
    l: int = 1,
    strength1: float = 1.0,
    strength2: float = 1.0,
    line_ratio: float = 1.0,
    delta: float = 4.0,
    delta_1f: float = 1.0,
    delta_2f: float = 0.0,
    z: float = 1.0,
    gain_scale: float = 1.0,
) -> DoubletParams:
    """Matched four-beam configuration with windings (l, 0, 0, -l).

    The second gain line duplicates the first line's radial profiles scaled
    by ``line_ratio``: c12 carries the doughnut amplitude of c11 with a flat
    phase and c22 carries the Gaussian amplitude of c21 with winding -l.
    This is the unique profile assignment that satisfies the pointwise
    matching condition together with equal grouped strengths (line_ratio 1)
    while keeping the mode normalizer nonzero on the axis.
    """
    c11 = BeamSpec(strength1, winding=l)
    c12 = BeamSpec(line_ratio * strength1, winding=0, radial_order=abs(l))
    c21 = BeamSpec(strength2, winding=0)
    c22 = BeamSpec(line_ratio * strength2, winding=-l, radial_order=0)
    return DoubletParams(
        beams=(c11, c12, c21, c22),
        delta=delta,
        delta_1f=delta_1f,
        delta_2f=delta_2f,
        z=z,
        gain_scale=gain_scale,
    )


@dataclass(frozen=True)
class MatchingReport:
    """Pointwise check of the two-line pump-ratio matching condition."""

    max_mismatch: float
    checked_samples: int
    skipped_samples: int
    tolerance: float = MATCHING_RTOL

    @property
    def passed(self) -> bool:
        return self.max_mismatch < self.tolerance


def _beam_arrays(params: DoubletParams, grid: GridSpec):
    r, phi = grid.polar()
    envs = [envelope(b, r) for b in params.beams]
    phases = [np.exp(1j * b.winding * phi) for b in params.beams]
    return envs, phases


def validate_matching(params: DoubletParams, grid: GridSpec) -> MatchingReport:
    """Evaluate c12/c11 - c22/c21 wherever both denominators are resolvable.

    Samples with a denominator envelope below 1e-12 * max strength are
    skipped; the report passes when the max relative mismatch is below
    1e-8. Proportional lines make the interacting mode close under the
    two-line growth rate; anything else leaves the closed forms invalid.
    """
    (e11, e12, e21, e22), (ph11, ph12, ph21, ph22) = _beam_arrays(params, grid)
    smax = max(b.strength for b in params.beams)
    if params.c11.strength == 0 or params.c21.strength == 0 or smax == 0:
        raise IndeterminateMatchingError(
            "matching ratio denominators (beams c11, c21) are identically zero"
        )
    floor = 1e-12 * smax
    valid = (e11 > floor) & (e21 > floor)
    if not np.any(valid):
        raise IndeterminateMatchingError("no grid sample resolves both matching denominators")
    ratio1 = (e12[valid] * ph12[valid]) / (e11[valid] * ph11[valid])
    ratio2 = (e22[valid] * ph22[valid]) / (e21[valid] * ph21[valid])
    scale = np.maximum(np.abs(ratio1), np.abs(ratio2))
    diff = np.abs(ratio1 - ratio2)
    nonzero = scale > 0
    rel = np.zeros_like(diff)
    rel[nonzero] = diff[nonzero] / scale[nonzero]
    return MatchingReport(
        max_mismatch=float(rel.max()),
        checked_samples=int(valid.sum()),
        skipped_samples=int(valid.size - valid.sum()),
    )


def require_matching(params: DoubletParams, grid: GridSpec) -> None:
    report = validate_matching(params, grid)
    if not report.passed:
        raise MatchingError(
            f"pump lines are not proportional: max relative mismatch "
            f"{report.max_mismatch:.3g} exceeds {report.tolerance:.0e}; the closed-form "
            "propagator does not apply to this beam set"
        )


def grouped_strengths(params: DoubletParams, grid: GridSpec) -> tuple[ComplexField, ComplexField]:
    """Per-line root-sum-square pump strengths (real fields)."""
    (e11, e12, e21, e22), _ = _beam_arrays(params, grid)
    eg1 = np.sqrt(e11 * e11 + e21 * e21)
    eg2 = np.sqrt(e12 * e12 + e22 * e22)
    return (
        ComplexField(grid, eg1.astype(np.complex128)),
        ComplexField(grid, eg2.astype(np.complex128)),
    )


def _grouped_radial(params: DoubletParams, r: np.ndarray | float):
    e11 = envelope(params.c11, r)
    e12 = envelope(params.c12, r)
    e21 = envelope(params.c21, r)
    e22 = envelope(params.c22, r)
    return e11 * e11 + e21 * e21, e12 * e12 + e22 * e22


def kappa_doublet(params: DoubletParams, r: np.ndarray | float) -> np.ndarray | complex:
    """Two-line growth rate of the interacting mode at radius r.

    kappa = [E_g1^2/(delta_2f + delta + i) + E_g2^2/(delta_2f - delta + i)]
    / delta_1f^2. At delta = 0 this reduces exactly to the singlet rate
    with the combined strength.
    """
    g1_sq, g2_sq = _grouped_radial(params, r)
    term1 = g1_sq / (params.delta_2f + params.delta + 1j)
    term2 = g2_sq / (params.delta_2f - params.delta + 1j)
    out = (term1 + term2) / params.delta_1f**2
    if np.ndim(r) == 0:
        return complex(out)
    return out


def _transform_arrays(params: DoubletParams, grid: GridSpec):
    r, phi = grid.polar()
    e11 = envelope(params.c11, r)
    e21 = envelope(params.c21, r)
    eg1 = np.sqrt(e11 * e11 + e21 * e21)
    if not np.all(eg1 > 0):
        raise SingularTransformError(
            "line-1 grouped pump strength vanishes on the grid; the doublet "
            "superposition transform is undefined there"
        )
    ph11 = np.exp(1j * params.c11.winding * phi)
    ph21 = np.exp(1j * params.c21.winding * phi)
    return e11, e21, eg1, ph11, ph21


def superpose_doublet(p1: ComplexField, p2: ComplexField, params: DoubletParams) -> ModePair:
    """Probe pair -> (interacting, free) modes, normalized by the line-1
    grouped strength. Pointwise unitary, same contract as the singlet."""
    grid = require_same_grid(p1, p2)
    e11, e21, eg1, ph11, ph21 = _transform_arrays(params, grid)
    psi = (e11 * np.conj(ph11) * p1.values + e21 * np.conj(ph21) * p2.values) / eg1
    xi = (e21 * ph21 * p1.values - e11 * ph11 * p2.values) / eg1
    return ModePair(ComplexField(grid, psi), ComplexField(grid, xi))


def reconstruct_doublet(modes: ModePair, params: DoubletParams) -> tuple[ComplexField, ComplexField]:
    grid = modes.grid
    e11, e21, eg1, ph11, ph21 = _transform_arrays(params, grid)
    p1 = (e11 * ph11 * modes.psi.values + e21 * np.conj(ph21) * modes.xi.values) / eg1
    p2 = (e21 * ph21 * modes.psi.values - e11 * np.conj(ph11) * modes.xi.values) / eg1
    return ComplexField(grid, p1), ComplexField(grid, p2)


def propagate_doublet(modes: ModePair, params: DoubletParams) -> ModePair:
    """psi -> psi * exp(i*kappa_doublet(r)*z); xi bit-identical.

    Valid only for matched pump lines, which is verified first.
    """
    grid = modes.grid
    require_matching(params, grid)
    r, _ = grid.polar()
    factor = np.exp(1j * kappa_doublet(params, r) * params.z)
    return ModePair(ComplexField(grid, modes.psi.values * factor), modes.xi)


def vortex_exchange_doublet(
    params: DoubletParams, grid: GridSpec, input_amplitude: complex = 1.0 + 0.0j
) -> tuple[ComplexField, ComplexField]:
    """Closed-form probe fields for a single uniform input probe.

    With the default winding assignment (l, 0, 0, -l) the generated probe 2
    is a doughnut of winding -l, even at zero two-photon detuning.
    """
    require_matching(params, grid)
    e11, e21, eg1, ph11, ph21 = _transform_arrays(params, grid)
    r, _ = grid.polar()
    growth = np.exp(1j * kappa_doublet(params, r) * params.z) - 1.0
    eg1_sq = eg1 * eg1
    p1 = (1.0 + (e11 * e11 / eg1_sq) * growth) * input_amplitude
    p2 = (e21 * e11 / eg1_sq) * ph21 * np.conj(ph11) * growth * input_amplitude
    return ComplexField(grid, p1), ComplexField(grid, p2)


def group_slowdown_doublet(params: DoubletParams, r: np.ndarray | float) -> np.ndarray | float:
    """Slowdown S = 1 + G * d Re(kappa)/d delta_2f, evaluated analytically.

    For equal grouped strengths at delta_2f = 0 this is
    1 + 2*G*(E^2/delta_1f^2)*(1 - delta^2)/(delta^2 + 1)^2: superluminal
    precisely when the line splitting exceeds the decay rate.
    """
    g1_sq, g2_sq = _grouped_radial(params, r)

    def dre(x):
        return (1.0 - x * x) / ((x * x + 1.0) ** 2)

    slope = (
        g1_sq * dre(params.delta_2f + params.delta) + g2_sq * dre(params.delta_2f - params.delta)
    ) / params.delta_1f**2
    s = 1.0 + params.gain_scale * slope
    if np.ndim(r) == 0:
        return float(s)
    return s


def uniform_probe_modes_doublet(params: DoubletParams, grid: GridSpec) -> ModePair:
    one = uniform_field(grid)
    return superpose_doublet(one, one, params)


def superposition_beam_doublet(
    params: DoubletParams, grid: GridSpec, z: float | None = None
) -> ComplexField:
    """Rendered doublet superposition beam for unit uniform probes, in the
    handedness of the line-1 vortex pump (conjugate of the interacting mode)."""
    modes = uniform_probe_modes_doublet(params, grid)
    if z is None:
        z = params.z
    if z != 0:
        run = params if z == params.z else _with_z(params, z)
        modes = propagate_doublet(modes, run)
    return modes.psi.conjugate()


def _with_z(params: DoubletParams, z: float) -> DoubletParams:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdiabaticityWarning)
        return DoubletParams(
            beams=params.beams,
            delta=params.delta,
            delta_1f=params.delta_1f,
            delta_2f=params.delta_2f,
            z=z,
            gain_scale=params.gain_scale,
        )
