import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from multitrans.indexset import ExactSet
from multitrans.systems import FiniteMap

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def finite_maps(draw, max_size=6):
    n = draw(st.integers(1, max_size))
    table = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return FiniteMap(tuple(table))


@st.composite
def exact_sets(draw, max_modulus=6, max_threshold=12):
    p = draw(st.integers(1, max_modulus))
    n0 = draw(st.integers(1, max_threshold))
    residues = draw(st.sets(st.integers(0, p - 1)))
    exceptional = draw(st.sets(st.integers(1, n0 - 1))) if n0 > 1 else set()
    return ExactSet(tuple(sorted(exceptional)), p, tuple(sorted(residues)), n0)


vectors_st = st.lists(st.integers(1, 4), min_size=1, max_size=3).map(tuple)


def random_exact(rng: random.Random, max_modulus=6, max_threshold=12) -> ExactSet:
    p = rng.randint(1, max_modulus)
    n0 = rng.randint(1, max_threshold)
    residues = tuple(r for r in range(p) if rng.random() < 0.5)
    exceptional = tuple(e for e in range(1, n0) if rng.random() < 0.3)
    return ExactSet(exceptional, p, residues, n0)


@pytest.fixture
def rng():
    return random.Random(20240601)
