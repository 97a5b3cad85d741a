import pytest
from hypothesis import strategies as st
from matroidlib.matroid import Matroid, uniform, boolean, direct_sum, empty_matroid
from matroidlib import catalog

def pytest_configure(config):
	config.addinivalue_line("markers", "slow: full sweeps over the enumerated catalog; deselect with -m \"not slow\"")

def bases(n:int, *sets) -> Matroid:
	"""Matroid on n elements from bases written as element tuples"""
	return Matroid.from_bases(n, [list(s) for s in sets])

U11 = uniform(1, 1)
U12 = uniform(1, 2)
U23 = uniform(2, 3)
U24 = uniform(2, 4)
U34 = uniform(3, 4)
B2 = boolean(2)
B3 = boolean(3)
EMPTY = empty_matroid()

SMALL = {
	"U11": U11, "U12": U12, "U23": U23, "U24": U24, "U34": U34, "U13": uniform(1, 3),
	"U25": uniform(2, 5), "U35": uniform(3, 5),
	"B1": boolean(1), "B2": B2, "B3": B3,
	"K4": catalog.graphic("K4"), "C4": catalog.graphic("C4"),
	"U11+U23": direct_sum(U11, U23), "U12+U12": direct_sum(U12, U12),
}
"""Loopless matroids cheap enough for property tests"""

small_matroids = st.sampled_from(sorted(SMALL)).map(SMALL.get)

@pytest.fixture(scope="session")
def fano():
	return catalog.fano()

@pytest.fixture(scope="session")
def nonfano():
	return catalog.nonfano()

@pytest.fixture(scope="session")
def vamos():
	return catalog.vamos()
