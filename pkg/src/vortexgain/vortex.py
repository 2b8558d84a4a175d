"""Phase-singularity detection and peripheral-vortex geometry prediction.

Winding convention: counterclockwise circulation of exp(1j*l*phi) counts as
charge +l. A single 2x2 plaquette resolves at most one unit of circulation
(four wrapped edges cannot exceed |2 pi|), so the plaquette map is the tool
for fields with singly-charged cores; higher concentrated charges are read
off a wide sampling ring with :func:`net_charge` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedConfigurationError
from .fieldgrid import ComplexField, bilinear_sample
from .singlet import SingletParams

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class VortexCore:
    """Detected phase singularity: subpixel position and integer charge."""

    x: float
    y: float
    charge: int

    @property
    def radius(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def angle(self) -> float:
        return math.atan2(self.y, self.x) % TWO_PI


@dataclass(frozen=True)
class RingStats:
    """Aggregate geometry of a detected vortex ring."""

    count: int
    mean_radius: float
    radius_spread: float
    spacing_uniformity: float


@dataclass(frozen=True)
class WindingMap:
    """Per-plaquette integer winding; plaquettes touching an exactly-zero
    sample are flagged indeterminate (their loop phases are meaningless)."""

    charges: np.ndarray
    indeterminate: np.ndarray


@dataclass(frozen=True)
class PeripheralPrediction:
    """Predicted ring geometry for a vortex pump against a Gaussian pump."""

    angles: tuple[float, ...]
    radius: float
    convention: str


def _wrap(d: np.ndarray) -> np.ndarray:
    return (d + math.pi) % TWO_PI - math.pi


def winding_map(field: ComplexField) -> WindingMap:
    """Loop sum of wrapped phase differences around every 2x2 plaquette, in
    units of 2 pi, rounded to integers. Nonzero only at singularities."""
    v = field.values
    ph = np.angle(v)
    ex = _wrap(np.diff(ph, axis=1))  # (ny, nx-1) along +x
    ey = _wrap(np.diff(ph, axis=0))  # (ny-1, nx) along +y
    loop = ex[:-1, :] + ey[:, 1:] - ex[1:, :] - ey[:, :-1]
    charges = np.rint(loop / TWO_PI).astype(np.int64)
    zero = v == 0
    indeterminate = zero[:-1, :-1] | zero[:-1, 1:] | zero[1:, :-1] | zero[1:, 1:]
    return WindingMap(charges, indeterminate)


def net_charge(
    field: ComplexField,
    radius: float,
    center: tuple[float, float] = (0.0, 0.0),
    samples: int | None = None,
) -> int:
    """Total winding along a circle, via dense bilinear sampling of the field."""
    g = field.grid
    if samples is None:
        cell = min(g.dx, g.dy)
        samples = max(64, int(8 * TWO_PI * radius / cell))
    theta = TWO_PI * np.arange(samples + 1) / samples
    vals = bilinear_sample(field, center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta))
    ph = np.angle(vals)
    return int(np.rint(_wrap(np.diff(ph)).sum() / TWO_PI))


def _refine_plaquette(field: ComplexField, ix: int, iy: int) -> tuple[float, float]:
    """Subpixel zero of the bilinear interpolant inside plaquette (ix, iy)."""
    v = field.values
    z00 = v[iy, ix]
    z10 = v[iy, ix + 1]
    z01 = v[iy + 1, ix]
    z11 = v[iy + 1, ix + 1]
    a = z00
    b = z10 - z00
    c = z01 - z00
    d = z11 - z10 - z01 + z00
    # Re and Im of a + b*u + c*t + d*u*t = 0; eliminate t, solve the quadratic in u.
    a0, a1, a2, a3 = a.real, b.real, c.real, d.real
    b0, b1, b2, b3 = a.imag, b.imag, c.imag, d.imag
    qa = b1 * a3 - b3 * a1
    qb = b0 * a3 + b1 * a2 - b2 * a1 - b3 * a0
    qc = b0 * a2 - b2 * a0
    candidates: list[float] = []
    if abs(qa) > 1e-300:
        disc = qb * qb - 4.0 * qa * qc
        if disc >= 0:
            root = math.sqrt(disc)
            candidates = [(-qb + root) / (2 * qa), (-qb - root) / (2 * qa)]
    elif abs(qb) > 1e-300:
        candidates = [-qc / qb]
    best = (0.5, 0.5)
    best_score = math.inf
    for u in candidates:
        den_re = a2 + a3 * u
        den_im = b2 + b3 * u
        if abs(den_re) >= abs(den_im):
            if den_re == 0:
                continue
            t = -(a0 + a1 * u) / den_re
        else:
            t = -(b0 + b1 * u) / den_im
        score = max(abs(u - 0.5), abs(t - 0.5))
        if score < best_score and -0.05 <= u <= 1.05 and -0.05 <= t <= 1.05:
            best = (min(max(u, 0.0), 1.0), min(max(t, 0.0), 1.0))
            best_score = score
    g = field.grid
    return (g.xs()[ix] + best[0] * g.dx, g.ys()[iy] + best[1] * g.dy)


def detect_cores(field: ComplexField, min_separation: float | None = None) -> list[VortexCore]:
    """Locate phase singularities from the plaquette winding map.

    Charged plaquettes within ``min_separation`` (default 3 grid cells) are
    clustered into one core; clusters whose charges cancel are dropped.
    Samples that are exactly zero get a core at the sample itself with the
    charge read off a small surrounding ring. Cores are sorted by radius,
    then angle.
    """
    g = field.grid
    cell = max(g.dx, g.dy)
    if min_separation is None:
        min_separation = 3.0 * cell
    if min_separation < cell:
        raise ValueError(f"min_separation {min_separation} is below one grid cell {cell}")

    cores: list[VortexCore] = []
    wm = winding_map(field)

    zero_iy, zero_ix = np.nonzero(field.values == 0)
    zero_points: list[tuple[float, float]] = []
    for ix, iy in zip(zero_ix, zero_iy):
        x = g.xs()[ix]
        y = g.ys()[iy]
        ring = 1.5 * cell
        if abs(x) + ring >= g.half_extent or abs(y) + ring >= g.half_extent:
            continue
        q = net_charge(field, ring, center=(x, y))
        zero_points.append((x, y))
        if q != 0:
            cores.append(VortexCore(x, y, q))

    iy, ix = np.nonzero(wm.charges * ~wm.indeterminate)
    pts = []
    for j, i in zip(iy, ix):
        x, y = _refine_plaquette(field, i, j)
        if any(math.hypot(x - zx, y - zy) < min_separation for zx, zy in zero_points):
            continue
        pts.append((x, y, int(wm.charges[j, i])))

    used = [False] * len(pts)
    for k in range(len(pts)):
        if used[k]:
            continue
        members = [k]
        used[k] = True
        frontier = [k]
        while frontier:
            cur = frontier.pop()
            for m in range(len(pts)):
                if not used[m] and math.hypot(pts[m][0] - pts[cur][0], pts[m][1] - pts[cur][1]) < min_separation:
                    used[m] = True
                    members.append(m)
                    frontier.append(m)
        charge = sum(pts[m][2] for m in members)
        if charge == 0:
            continue
        weight = sum(abs(pts[m][2]) for m in members)
        x = sum(pts[m][0] * abs(pts[m][2]) for m in members) / weight
        y = sum(pts[m][1] * abs(pts[m][2]) for m in members) / weight
        cores.append(VortexCore(x, y, charge))

    cores.sort(key=lambda c: (c.radius, c.angle))
    return cores


def ring_statistics(cores: list[VortexCore]) -> RingStats:
    """Count, mean radius, radius spread (peak to peak) and the worst
    deviation of consecutive azimuthal gaps from the uniform spacing."""
    n = len(cores)
    if n == 0:
        return RingStats(0, 0.0, 0.0, 0.0)
    radii = np.array([c.radius for c in cores])
    angles = np.sort([c.angle for c in cores])
    gaps = np.diff(angles, append=angles[0] + TWO_PI)
    return RingStats(
        count=n,
        mean_radius=float(radii.mean()),
        radius_spread=float(radii.max() - radii.min()),
        spacing_uniformity=float(np.abs(gaps - TWO_PI / n).max()),
    )


def predict_peripheral(
    params: SingletParams, convention: str = "profile-balance"
) -> PeripheralPrediction:
    """Predicted angles and ring radius of the peripheral vortices for a
    vortex pump (l1 != 0) against a Gaussian pump (l2 = 0).

    The superposition beam vanishes where the vortex phase opposes the
    Gaussian pump, so the |l1| ring angles are the odd multiples of
    pi/|l1|; the remaining integer multiples host the zeros of the
    complementary free mode instead. Two radius conventions:

    * ``profile-balance``: the radius where the two doughnut/Gaussian
      envelopes balance, (s2/s1)**(1/|l1|) in waist units. This is the
      exact zero radius of the sampled beam.
    * ``lg-normalized``: (|l1|! * s2/s1)**(1/(2|l1|)), the form quoted for
      normalized Laguerre-Gaussian mode bases. Reported for comparison;
      detection on the sampled field is the arbiter between the two.
    """
    l1 = params.beam1.winding
    if l1 == 0 or params.beam2.winding != 0:
        raise UnsupportedConfigurationError(
            "peripheral prediction needs a vortex first pump (l1 != 0) and a "
            f"Gaussian second pump (l2 = 0); got l1={l1}, l2={params.beam2.winding}"
        )
    s1 = params.beam1.strength
    s2 = params.beam2.strength
    if s1 == 0:
        raise UnsupportedConfigurationError("vortex pump strength is zero; no ring exists")
    n = abs(l1)
    w = params.beam1.waist
    if convention == "profile-balance":
        radius = w * (s2 / s1) ** (1.0 / n)
    elif convention == "lg-normalized":
        radius = w * (math.factorial(n) * s2 / s1) ** (1.0 / (2.0 * n))
    else:
        raise ValueError(f"unknown convention {convention!r}")
    angles = tuple(sorted(((2 * k + 1) * math.pi / n) % TWO_PI for k in range(n)))
    return PeripheralPrediction(angles=angles, radius=radius, convention=convention)
