import pytest

from algebra.series import RingSpec
from lab.parse import parse_poly
from utilities.utility import clear_messages


@pytest.fixture(autouse=True)
def _fresh_messages():
    clear_messages()
    yield
    clear_messages()


@pytest.fixture
def poly():
    """poly(ring, text) -> series, a short way to write elements in tests."""
    return lambda ring, text: parse_poly(text, ring)


@pytest.fixture
def ring2():
    return RingSpec(2, 0, 8)


@pytest.fixture
def ring3():
    return RingSpec(3, 0, 8)
