import pytest

from h2plus.datafiles import (
    load_center_frequencies,
    load_coefficients,
    load_orbital_elements,
    load_reference_levels_even,
    load_reference_levels_odd,
    load_reference_lines,
    solve_level,
)


@pytest.fixture(scope="session")
def coefficients():
    return load_coefficients()


@pytest.fixture(scope="session")
def orbital_elements():
    return load_orbital_elements()


@pytest.fixture(scope="session")
def center_frequencies():
    return load_center_frequencies()


@pytest.fixture(scope="session")
def reference_levels_even():
    return load_reference_levels_even()


@pytest.fixture(scope="session")
def reference_levels_odd():
    return load_reference_levels_odd()


@pytest.fixture(scope="session")
def reference_lines():
    return load_reference_lines()


@pytest.fixture(scope="session")
def solved_levels(coefficients):
    """Hyperfine solutions for every shipped (v, L), keyed by (v, L)."""
    return {
        (level.v, level.L): solve_level(level.v, level.L, coefficients=coefficients)
        for level in coefficients
    }
