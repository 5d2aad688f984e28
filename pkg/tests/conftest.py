import pytest

from jaclat.expr import evaluate


@pytest.fixture(scope="session")
def lat():
    return evaluate
