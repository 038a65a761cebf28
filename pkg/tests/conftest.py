import pytest

from qmzv.miner import VectorCache


@pytest.fixture(scope="session")
def session_cache(tmp_path_factory):
    """One vectorization cache per test session, shared by the heavy runs."""
    return VectorCache(tmp_path_factory.mktemp("qmzv-cache"))
