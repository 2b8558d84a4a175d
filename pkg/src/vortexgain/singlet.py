"""Closed-form physics of the double-Raman (singlet) gain scheme.

Two weak probes couple to the atoms only through one superposition mode,
psi, while the orthogonal combination xi propagates as in free space. psi
picks up the complex growth rate kappa(r), whose imaginary part is always
amplifying (pump energy flows into the probes) and whose real part sets the
dispersion, hence the sub- or superluminal group velocity, through the
two-photon detuning.

All quantities are dimensionless: detunings and pump strengths in units of
the Raman-level decay rate, distances in units of the characteristic gain
length, lengths in beam waists.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AdiabaticityWarning, SingularTransformError
from .fieldgrid import BeamSpec, ComplexField, GridSpec, envelope, require_same_grid, uniform_field


@dataclass(frozen=True)
class SingletParams:
    """Full parameter set for the singlet scheme.

    ``delta_1f`` is the (large) one-photon detuning, ``delta_2f`` the
    two-photon detuning, ``z`` the propagation distance and ``gain_scale``
    the dimensionless dispersion-to-transit factor entering the group
    slowdown (ratio of the vacuum transit scale to the gain length).
    """

    beam1: BeamSpec
    beam2: BeamSpec
    delta_1f: float = 1.0
    delta_2f: float = 4.0
    z: float = 1.0
    gain_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.delta_1f == 0:
            raise ValueError("delta_1f must be nonzero; the eliminated closed forms diverge at 0")
        if self.beam1.winding != 0 and self.beam2.winding != 0:
            raise ValueError(
                "both pump windings nonzero is rejected: the total pump strength would "
                "vanish on the beam axis and the superposition modes blow up as r -> 0"
            )
        smax = max(self.beam1.strength, self.beam2.strength)
        if abs(self.delta_1f) * abs(self.delta_2f - 1j) < 10.0 * smax * smax:
            warnings.warn(
                "one-photon detuning is not large against the pump strengths "
                f"(|delta_1f|*|delta_2f - i| = {abs(self.delta_1f) * abs(self.delta_2f - 1j):.3g} "
                f"< 10*max_strength^2 = {10 * smax * smax:.3g}); adiabatic closed forms are approximate",
                AdiabaticityWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class ModePair:
    """The interacting mode psi and the free mode xi on a shared grid."""

    psi: ComplexField
    xi: ComplexField

    def __post_init__(self) -> None:
        require_same_grid(self.psi, self.xi)

    @property
    def grid(self) -> GridSpec:
        return self.psi.grid


def pump_strengths(params: SingletParams, r: np.ndarray | float) -> tuple[np.ndarray, np.ndarray]:
    """Radial pump envelopes (E1, E2) at radius r."""
    return envelope(params.beam1, r), envelope(params.beam2, r)


def pump_envelopes(
    params: SingletParams, grid: GridSpec
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(E1, E2, E_total, phi) sampled on the grid; E_total = sqrt(E1^2 + E2^2)."""
    r, phi = grid.polar()
    e1, e2 = pump_strengths(params, r)
    ec = np.sqrt(e1 * e1 + e2 * e2)
    return e1, e2, ec, phi


def _transform_arrays(params: SingletParams, grid: GridSpec):
    e1, e2, ec, phi = pump_envelopes(params, grid)
    if not np.all(ec > 0):
        raise SingularTransformError(
            "total pump strength vanishes on the grid (zero-strength or vortex-only "
            "configuration); the probe superposition transform is undefined there"
        )
    ph1 = np.exp(1j * params.beam1.winding * phi)
    ph2 = np.exp(1j * params.beam2.winding * phi)
    return e1, e2, ec, ph1, ph2


def superpose(p1: ComplexField, p2: ComplexField, params: SingletParams) -> ModePair:
    """Rotate the probe pair into the interacting/free mode basis.

    Pointwise unitary: |psi|^2 + |xi|^2 = |p1|^2 + |p2|^2.
    """
    grid = require_same_grid(p1, p2)
    e1, e2, ec, ph1, ph2 = _transform_arrays(params, grid)
    psi = (e1 * np.conj(ph1) * p1.values + e2 * np.conj(ph2) * p2.values) / ec
    xi = (e2 * ph2 * p1.values - e1 * ph1 * p2.values) / ec
    return ModePair(ComplexField(grid, psi), ComplexField(grid, xi))


def reconstruct(modes: ModePair, params: SingletParams) -> tuple[ComplexField, ComplexField]:
    """Inverse of :func:`superpose`; exact up to rounding."""
    grid = modes.grid
    e1, e2, ec, ph1, ph2 = _transform_arrays(params, grid)
    p1 = (e1 * ph1 * modes.psi.values + e2 * np.conj(ph2) * modes.xi.values) / ec
    p2 = (e2 * ph2 * modes.psi.values - e1 * np.conj(ph1) * modes.xi.values) / ec
    return ComplexField(grid, p1), ComplexField(grid, p2)


def kappa(params: SingletParams, r: np.ndarray | float) -> np.ndarray | complex:
    """Complex growth rate of psi at radius r, in inverse gain lengths.

    kappa = E_total(r)^2 / delta_1f^2 / (delta_2f + i). The imaginary part
    is negative for every radius, so exp(i*kappa*z) never attenuates.
    """
    e1, e2 = pump_strengths(params, r)
    ec_sq = e1 * e1 + e2 * e2
    out = (ec_sq / (params.delta_2f + 1j)) / params.delta_1f**2
    if np.ndim(r) == 0:
        return complex(out)
    return out


def propagate(modes: ModePair, params: SingletParams) -> ModePair:
    """Advance the mode pair to z: psi -> psi * exp(i*kappa(r)*z), xi unchanged.

    xi is returned bit-identical; the z=0 unitarity of the pair is
    deliberately broken by the gain for z > 0.
    """
    grid = modes.grid
    r, _ = grid.polar()
    factor = np.exp(1j * kappa(params, r) * params.z)
    return ModePair(ComplexField(grid, modes.psi.values * factor), modes.xi)


def vortex_exchange(
    params: SingletParams, grid: GridSpec, input_amplitude: complex = 1.0 + 0.0j
) -> tuple[ComplexField, ComplexField]:
    """Closed-form probe fields at z for a single uniform input probe.

    Probe 1 enters with the given uniform amplitude, probe 2 with zero. The
    generated probe 2 exits with winding l2 - l1 and a doughnut profile; at
    z = 0 it is identically zero. Computed directly from the closed forms,
    not via the transform round trip, so the two routes can be checked
    against each other.
    """
    e1, e2, ec, ph1, ph2 = _transform_arrays(params, grid)
    r, _ = grid.polar()
    growth = np.exp(1j * kappa(params, r) * params.z) - 1.0
    ec_sq = ec * ec
    p1 = (1.0 + (e1 * e1 / ec_sq) * growth) * input_amplitude
    p2 = (e2 * e1 / ec_sq) * ph2 * np.conj(ph1) * growth * input_amplitude
    return ComplexField(grid, p1), ComplexField(grid, p2)


def group_slowdown(params: SingletParams, r: np.ndarray | float) -> np.ndarray | float:
    """Dimensionless slowdown S = c/v_g of the interacting mode at radius r.

    S = 1 + G * (E_total^2/delta_1f^2) * (1 - delta_2f^2) / (delta_2f^2 + 1)^2,
    equivalently 1 + G * d Re(kappa)/d delta_2f. S > 1 (subluminal) iff
    |delta_2f| < 1, S < 1 (superluminal) iff |delta_2f| > 1.
    """
    e1, e2 = pump_strengths(params, r)
    ec_sq = e1 * e1 + e2 * e2
    d2 = params.delta_2f
    s = 1.0 + params.gain_scale * (ec_sq / params.delta_1f**2) * (1.0 - d2 * d2) / (
        (d2 * d2 + 1.0) ** 2
    )
    if np.ndim(r) == 0:
        return float(s)
    return s


def uniform_probe_modes(params: SingletParams, grid: GridSpec) -> ModePair:
    """Mode pair at z=0 for unit uniform probes on both inputs, the entry
    condition behind the off-axis vortex maps."""
    one = uniform_field(grid)
    return superpose(one, one, params)


def superposition_beam(params: SingletParams, grid: GridSpec, z: float | None = None) -> ComplexField:
    """Rendered superposition beam at distance z for unit uniform probes.

    Returned in the handedness of the vortex pump (the conjugate of the
    interacting mode), so the |l1| peripheral singularities around the core
    carry charge l1/|l1| and the total enclosed charge on a wide ring is l1.
    """
    modes = uniform_probe_modes(params, grid)
    if z is None:
        z = params.z
    if z != 0:
        run = params if z == params.z else _with_z(params, z)
        modes = propagate(modes, run)
    return modes.psi.conjugate()


def _with_z(params: SingletParams, z: float) -> SingletParams:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdiabaticityWarning)
        return SingletParams(
            beam1=params.beam1,
            beam2=params.beam2,
            delta_1f=params.delta_1f,
            delta_2f=params.delta_2f,
            z=z,
            gain_scale=params.gain_scale,
        )
