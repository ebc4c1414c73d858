"""Shared grids and reference signals."""

import pytest

from phasespace_lab.models.domain import DomainMask
from phasespace_lab.models.grids import Grid1D, PhaseGrid
from phasespace_lab.services.signals import gaussian, hermite


@pytest.fixture
def grid() -> Grid1D:
    """Default experiment grid: n = 512, dt = 1/16."""
    return Grid1D(n=512, dt=1 / 16)


@pytest.fixture
def small_grid() -> Grid1D:
    return Grid1D(n=128, dt=1 / 8)


@pytest.fixture
def phase_grid(grid) -> PhaseGrid:
    return PhaseGrid.for_wigner(grid)


@pytest.fixture
def unit_disk(phase_grid) -> DomainMask:
    return DomainMask.disk(phase_grid, 1.0).cropped()


@pytest.fixture
def g0(grid):
    """Unnormalized e^{−πt²}, whose Wigner distribution is √2·e^{−2π(x²+ξ²)}."""
    return gaussian(grid)


@pytest.fixture
def h1(grid):
    return hermite(grid, 1)
