import pytest

from qclab import (
    HarmonicPotential,
    PhysicalConstants,
    assemble_hamiltonian,
    build_grid,
    solve_lowest_eigenpairs,
)


@pytest.fixture(scope="session")
def constants():
    return PhysicalConstants()


@pytest.fixture(scope="session")
def harmonic_grid():
    # dx = 0.01; wide enough that n <= 7 states decay below the node
    # threshold well inside the walls
    return build_grid(-12.0, 12.0, 2401)


@pytest.fixture(scope="session")
def harmonic_pairs(harmonic_grid, constants):
    """Lowest eight harmonic eigenpairs, solved once per session."""
    h = assemble_hamiltonian(HarmonicPotential(1.0), harmonic_grid, constants)
    return solve_lowest_eigenpairs(h, 8)


@pytest.fixture(scope="session")
def small_grid():
    # cheap grid for evolution and CLI tests
    return build_grid(-8.0, 8.0, 401)
