import numpy as np
import pytest

from atomlight.units import ChargeConvention, UnitSystem, standard_hydrogen


@pytest.fixture(scope="session")
def hydrogen_params():
    return standard_hydrogen()


@pytest.fixture(scope="session")
def paper_params():
    return standard_hydrogen(omega=3.73)


@pytest.fixture(scope="session")
def hl_units():
    return UnitSystem(ChargeConvention.HEAVISIDE_LORENTZ)


@pytest.fixture(scope="session")
def paper_units():
    return UnitSystem(ChargeConvention.PAPER_GAUSSIAN)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
