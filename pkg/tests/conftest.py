import pytest

from ballot_lattice import parse_ballot, relation_of


@pytest.fixture
def deep_ballot():
    """Three ranked candidates over a four-way tied tail."""
    return parse_ballot("x>y>z>a~b~c~d")


@pytest.fixture
def deep_relation(deep_ballot):
    return relation_of(deep_ballot)
