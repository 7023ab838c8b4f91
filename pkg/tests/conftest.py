import pytest

import bellband as bb

PUMP_NM = 351.0
TYPE2_LENGTH_M = 0.5e-3
TYPE1_LENGTH_M = 1.0e-3


@pytest.fixture(scope="session")
def type2_setup():
    return bb.SetupConfig.collinear_degenerate(
        bb.BBO_EIMERL, bb.Scheme.TYPE_II, TYPE2_LENGTH_M, PUMP_NM
    )


@pytest.fixture(scope="session")
def type2_coeffs(type2_setup):
    return bb.dispersion_coefficients(bb.BBO_EIMERL, type2_setup)


@pytest.fixture(scope="session")
def type1_setup():
    return bb.SetupConfig.collinear_degenerate(
        bb.BBO_EIMERL, bb.Scheme.TWO_TYPE_I, TYPE1_LENGTH_M, PUMP_NM
    )


@pytest.fixture(scope="session")
def type1_coeffs(type1_setup):
    return bb.dispersion_coefficients(bb.BBO_EIMERL, type1_setup)
