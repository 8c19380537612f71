import pytest

from actfort import load_ecosystem_file
from support import fixture_path


@pytest.fixture
def load():
    return lambda name: load_ecosystem_file(fixture_path(name))


@pytest.fixture
def sample(load):
    return load("sample.json")
