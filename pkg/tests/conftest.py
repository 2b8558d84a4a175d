import numpy as np
import pytest

from vortexgain import BeamSpec, ComplexField, GridSpec, SingletParams


@pytest.fixture
def unit_grid() -> GridSpec:
    """9x9 grid over +-4 waists: integer coordinates land on exact samples."""
    return GridSpec(9, 9, 4.0)


@pytest.fixture
def fine_grid() -> GridSpec:
    return GridSpec(129, 129, 4.0)


@pytest.fixture
def fig_params() -> SingletParams:
    """Equal unit pumps, vortex against Gaussian, superluminal detuning."""
    return SingletParams(BeamSpec(1.0, 1), BeamSpec(1.0, 0), delta_1f=1.0, delta_2f=4.0, z=1.0)


def random_field(grid: GridSpec, seed: int) -> ComplexField:
    rng = np.random.default_rng(seed)
    values = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return ComplexField(grid, values)
