import pytest

from evfaraday import ELEMENTARY_CHARGE, BeamParameters, magnetic_width


@pytest.fixture(scope="session")
def beam():
    """The worked-example beam: 60 keV electrons in a 1 T field."""
    return BeamParameters(60e3 * ELEMENTARY_CHARGE, 1.0)


@pytest.fixture(scope="session")
def w_b(beam):
    return magnetic_width(beam)
