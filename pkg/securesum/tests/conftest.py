from pathlib import Path

import pytest

from securesum.domain.hypergraph import KeyHypergraph


FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def four_users():
    return KeyHypergraph(4, [[1, 2, 4], [2, 3], [3, 4]])


@pytest.fixture(scope="session")
def q5_precoding():
    from securesum.services.serde import read_precoding_fixture

    return read_precoding_fixture(FIXTURES / "q5_precoding.json")


@pytest.fixture(scope="session")
def q5_scheme(q5_precoding):
    from securesum.services.schemes import symmetric_keygen

    return symmetric_keygen(5, 2, 2, 5, 1, None, fixture=q5_precoding)
