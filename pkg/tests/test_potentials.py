import numpy as np
import pytest

from qclab import (
    FreePotential,
    HarmonicPotential,
    InfiniteWellPotential,
    SmoothBarrierPotential,
    TabulatedPotential,
    build_grid,
    eval_potential,
    load_tabulated_csv,
    potential_energy,
    potential_force,
)
from qclab.grids import PhysicalConstants


@pytest.fixture
def grid():
    return build_grid(-5.0, 5.0, 101)


def test_catalog_shapes_and_values(grid, constants):
    assert np.all(eval_potential(FreePotential(), grid, constants) == 0.0)
    assert np.all(eval_potential(InfiniteWellPotential(), grid, constants) == 0.0)

    v_h = eval_potential(HarmonicPotential(2.0), grid, constants)
    assert v_h[50] == 0.0
    assert v_h[0] == pytest.approx(0.5 * 4.0 * 25.0)

    v_b = eval_potential(SmoothBarrierPotential(3.0, 0.5, 1.0), grid, constants)
    assert np.max(v_b) == pytest.approx(3.0)
    assert grid.x[np.argmax(v_b)] == pytest.approx(1.0)


def test_even_potential_is_exactly_even(constants):
    # symmetric grids store symmetric points bitwise, so V(-x) == V(x)
    grid = build_grid(-7.0, 7.0, 201)
    v = eval_potential(HarmonicPotential(1.0), grid, constants)
    assert np.array_equal(v, v[::-1])


def test_parameter_validation():
    with pytest.raises(ValueError):
        HarmonicPotential(0.0)
    with pytest.raises(ValueError):
        SmoothBarrierPotential(-1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        SmoothBarrierPotential(1.0, 0.0, 0.0)


def test_tabulated_must_match_grid_exactly(grid, constants):
    tab = TabulatedPotential(grid.x, np.cos(grid.x))
    assert np.array_equal(eval_potential(tab, grid, constants), np.cos(grid.x))
    other = build_grid(-5.0, 5.0, 102)
    with pytest.raises(ValueError, match="do not match the grid"):
        eval_potential(tab, other, constants)


def test_potential_energy_interpolates_between_samples(grid, constants):
    tab = TabulatedPotential(grid.x, grid.x**2)
    # midpoint of a linear interpolant of x^2 between adjacent samples
    x_mid = 0.5 * (grid.x[10] + grid.x[11])
    expected = 0.5 * (grid.x[10] ** 2 + grid.x[11] ** 2)
    assert potential_energy(tab, x_mid, constants) == pytest.approx(expected)
    with pytest.raises(ValueError, match="outside the tabulated domain"):
        potential_energy(tab, 5.1, constants)


def test_force_is_minus_gradient(grid, constants):
    xs = np.linspace(-3.0, 3.0, 37)
    eps = 1e-6
    for pot in (
        HarmonicPotential(1.7),
        SmoothBarrierPotential(2.0, 0.8, -0.5),
    ):
        numeric = -(
            potential_energy(pot, xs + eps, constants)
            - potential_energy(pot, xs - eps, constants)
        ) / (2.0 * eps)
        assert np.allclose(potential_force(pot, xs, constants), numeric, atol=1e-8)


def test_force_scalar_and_array_agree(constants):
    pot = HarmonicPotential(1.0)
    xs = np.array([-1.0, 0.25, 2.0])
    batch = potential_force(pot, xs, constants)
    singles = [potential_force(pot, float(x), constants) for x in xs]
    assert np.allclose(batch, singles)


def test_tabulated_csv_roundtrip(tmp_path, constants):
    grid = build_grid(0.0, 1.0, 11)
    path = tmp_path / "table.csv"
    rows = ["x,V"] + [f"{float(x)!r},{float(x * x)!r}" for x in grid.x]
    path.write_text("\n".join(rows) + "\n")
    tab = load_tabulated_csv(path)
    assert np.array_equal(tab.x, grid.x)
    assert np.array_equal(eval_potential(tab, grid, constants), grid.x**2)


def test_tabulated_csv_rejects_garbage_after_data(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,V\n0.0,1.0\n0.5,oops\n")
    with pytest.raises(ValueError, match="malformed potential row"):
        load_tabulated_csv(path)


def test_constants_default_natural_units():
    c = PhysicalConstants()
    assert c.hbar == 1.0 and c.mass == 1.0
