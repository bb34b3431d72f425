import pytest

from iqhall.quivers import make_iquiver


@pytest.fixture
def a2_split():
    return make_iquiver(["1", "2"], [("a", "1", "2")])


@pytest.fixture
def a3_line():
    return make_iquiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])


@pytest.fixture
def a3_invol():
    # 1 -> 2 <- 3 with the involution swapping the endpoints
    return make_iquiver(["1", "2", "3"], [("a", "1", "2"), ("b", "3", "2")],
                        tau={"1": "3", "2": "2", "3": "1"})


@pytest.fixture
def swap_pair():
    return make_iquiver(["1", "2"], [], tau={"1": "2", "2": "1"})


@pytest.fixture
def d4_split():
    return make_iquiver(["0", "1", "2", "3"],
                        [("a", "1", "0"), ("b", "2", "0"), ("c", "3", "0")])
