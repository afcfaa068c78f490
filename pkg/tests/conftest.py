import numpy as np
import pytest

from boussinesq_ist.painleve import solve_hastings_mcleod
from boussinesq_ist.scattering import compact_example_data, gaussian_example_data, reflection_coefficients


@pytest.fixture(scope="session")
def compact_data():
    return compact_example_data(4097)


@pytest.fixture(scope="session")
def compact_table(compact_data):
    return reflection_coefficients(compact_data, n_theta=1200)


@pytest.fixture(scope="session")
def gaussian_table():
    return reflection_coefficients(gaussian_example_data(), n_theta=1200)


@pytest.fixture(scope="session")
def hm():
    return solve_hastings_mcleod(12.0, 2401)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
