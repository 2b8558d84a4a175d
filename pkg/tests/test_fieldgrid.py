import math

import numpy as np
import pytest

from vortexgain import (
    BeamSpec,
    ComplexField,
    GridSpec,
    bilinear_sample,
    make_beam,
    net_charge,
    phase_map,
    total_strength,
    uniform_field,
)
from vortexgain.errors import GridMismatchError

E_INV = math.exp(-1.0)


def sample_at(field, x, y):
    g = field.grid
    ix = int(round((x + g.half_extent) / g.dx))
    iy = int(round((y + g.half_extent) / g.dy))
    assert math.isclose(g.xs()[ix], x, abs_tol=1e-12)
    assert math.isclose(g.ys()[iy], y, abs_tol=1e-12)
    return field.values[iy, ix]


class TestGridSpec:
    def test_coordinate_map_is_invertible(self):
        g = GridSpec(17, 33, 2.5)
        assert g.xs()[0] == -2.5
        assert g.xs()[-1] == pytest.approx(2.5, abs=1e-15)
        for i in (0, 5, 16):
            x = g.xs()[i]
            assert round((x + g.half_extent) / g.dx) == i

    def test_rejects_degenerate_grids(self):
        with pytest.raises(ValueError):
            GridSpec(1, 8, 4.0)
        with pytest.raises(ValueError):
            GridSpec(8, 8, 0.0)

    def test_default_matches_documented_values(self):
        g = GridSpec()
        assert (g.nx, g.ny, g.half_extent) == (512, 512, 4.0)


class TestMakeBeam:
    def test_gaussian_peak_is_strength(self, unit_grid):
        beam = make_beam(BeamSpec(1.0, 0), unit_grid)
        assert sample_at(beam, 0.0, 0.0) == 1.0 + 0.0j

    def test_vortex_value_on_axis_x(self, unit_grid):
        beam = make_beam(BeamSpec(1.0, 1), unit_grid)
        assert sample_at(beam, 1.0, 0.0) == pytest.approx(E_INV + 0.0j, abs=1e-15)

    def test_charge_two_value_on_axis_y(self, unit_grid):
        # phi = pi/2 so the l=2 phase factor is exp(i*pi) = -1
        beam = make_beam(BeamSpec(1.0, 2), unit_grid)
        assert sample_at(beam, 0.0, 1.0) == pytest.approx(-E_INV + 0.0j, abs=1e-15)

    def test_core_sample_is_exactly_zero_for_vortex(self, unit_grid):
        beam = make_beam(BeamSpec(1.0, 3), unit_grid)
        assert sample_at(beam, 0.0, 0.0) == 0.0 + 0.0j

    def test_magnitude_is_azimuthally_symmetric(self, fine_grid):
        mag = make_beam(BeamSpec(1.0, 2), fine_grid).magnitude()
        r, _ = fine_grid.polar()
        # mirrored samples share r to rounding and must share |value|
        assert np.abs(r - r[:, ::-1]).max() < 1e-12
        assert np.abs(mag - mag[:, ::-1]).max() < 1e-12
        assert np.abs(mag - mag[::-1, :]).max() < 1e-12
        assert np.abs(mag - mag.T).max() < 1e-12

    @pytest.mark.parametrize("l", [1, 2, 4])
    def test_radial_maximum_at_sqrt_half_l(self, fine_grid, l):
        beam = make_beam(BeamSpec(1.0, l), fine_grid)
        r, _ = fine_grid.polar()
        peak_r = r.ravel()[np.argmax(beam.magnitude())]
        assert abs(peak_r - math.sqrt(l / 2.0)) <= math.hypot(fine_grid.dx, fine_grid.dy)

    @pytest.mark.parametrize("l", [-3, -1, 1, 2, 5])
    def test_phase_winds_exactly_l(self, fine_grid, l):
        beam = make_beam(BeamSpec(1.0, l), fine_grid)
        assert net_charge(beam, radius=1.5) == l

    def test_decoupled_radial_order(self, unit_grid):
        # doughnut amplitude with a flat phase
        beam = make_beam(BeamSpec(1.0, 0, radial_order=2), unit_grid)
        assert sample_at(beam, 0.0, 0.0) == 0.0 + 0.0j
        assert sample_at(beam, 1.0, 0.0) == pytest.approx(E_INV, abs=1e-15)
        assert sample_at(beam, 0.0, 1.0) == pytest.approx(E_INV, abs=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            BeamSpec(-1.0, 0)
        with pytest.raises(ValueError):
            BeamSpec(1.0, 0, waist=0.0)
        with pytest.raises(ValueError):
            BeamSpec(1.0, 0, radial_order=-1)


class TestTotalStrength:
    def test_two_unit_gaussians_give_sqrt_two(self, unit_grid):
        beams = [make_beam(BeamSpec(1.0, 0), unit_grid) for _ in range(2)]
        total = total_strength(beams)
        assert sample_at(total, 0.0, 0.0) == pytest.approx(math.sqrt(2.0), abs=1e-15)

    def test_single_beam_is_identity_on_magnitude(self, unit_grid):
        beam = make_beam(BeamSpec(0.7, 2), unit_grid)
        total = total_strength([beam])
        assert np.allclose(total.values.real, beam.magnitude(), atol=1e-15)

    def test_vortex_vanishes_at_core(self, unit_grid):
        fields = [make_beam(BeamSpec(1.0, 1), unit_grid), make_beam(BeamSpec(1.0, 0), unit_grid)]
        total = total_strength(fields)
        assert sample_at(total, 0.0, 0.0) == 1.0 + 0.0j

    def test_invariant_under_unit_phase_factor(self, unit_grid):
        rng = np.random.default_rng(7)
        base = make_beam(BeamSpec(1.0, 1), unit_grid)
        phase = np.exp(1j * rng.uniform(-np.pi, np.pi, unit_grid.shape))
        twisted = ComplexField(unit_grid, base.values * phase)
        a = total_strength([base, make_beam(BeamSpec(0.5, 0), unit_grid)])
        b = total_strength([twisted, make_beam(BeamSpec(0.5, 0), unit_grid)])
        assert np.abs(a.values - b.values).max() < 1e-12

    def test_mismatched_grids_rejected(self, unit_grid, fine_grid):
        with pytest.raises(GridMismatchError):
            total_strength([uniform_field(unit_grid), uniform_field(fine_grid)])


class TestPhaseMap:
    def test_constant_one_has_zero_phase(self, unit_grid):
        pm = phase_map(uniform_field(unit_grid, 1.0 + 0.0j))
        assert np.all(pm.field.values.real == 0.0)
        assert not pm.zero_samples.any()

    def test_negative_imaginary_unit(self, unit_grid):
        pm = phase_map(uniform_field(unit_grid, -1.0j))
        assert np.allclose(pm.field.values.real, -math.pi / 2.0)

    def test_vortex_phase_on_negative_x_axis(self, unit_grid):
        pm = phase_map(make_beam(BeamSpec(1.0, 1), unit_grid))
        assert sample_at(pm.field, -1.0, 0.0).real == pytest.approx(math.pi, abs=1e-12)

    def test_zero_amplitude_flagged_and_pinned(self, unit_grid):
        pm = phase_map(make_beam(BeamSpec(1.0, 1), unit_grid))
        center = (unit_grid.ny // 2, unit_grid.nx // 2)
        assert pm.zero_samples[center]
        assert pm.field.values[center] == 0.0


class TestComplexField:
    def test_rejects_non_finite(self, unit_grid):
        bad = np.ones(unit_grid.shape, dtype=np.complex128)
        bad[3, 3] = np.nan
        with pytest.raises(ValueError):
            ComplexField(unit_grid, bad)

    def test_values_are_read_only(self, unit_grid):
        field = uniform_field(unit_grid)
        with pytest.raises(ValueError):
            field.values[0, 0] = 5.0

    def test_bilinear_matches_samples_and_midpoints(self, unit_grid):
        field = make_beam(BeamSpec(1.0, 0), unit_grid)
        assert bilinear_sample(field, 1.0, 0.0) == pytest.approx(E_INV)
        mid = bilinear_sample(field, 0.5, 0.0)
        expected = 0.5 * (1.0 + E_INV)
        assert mid == pytest.approx(expected, abs=1e-15)
        with pytest.raises(ValueError):
            bilinear_sample(field, 5.0, 0.0)
