import pytest

from hypermatch.threshold import exhaustive_verify_n6


@pytest.fixture(scope="session")
def n6_report():
    # about 20 s single-threaded; shared by the threshold and acceptance tests
    return exhaustive_verify_n6(workers=1)
