import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mosrs.sampling import default_initial_size, lhs


def stratified(design):
    n0 = design.shape[0]
    for col in design.T:
        strata = np.floor(col * n0).astype(int)
        if sorted(strata.tolist()) != list(range(n0)):
            return False
    return True


def test_four_by_two(rng):
    d = lhs(4, 2, rng)
    assert d.shape == (4, 2)
    for col in d.T:
        assert sorted(np.floor(col / 0.25).astype(int)) == [0, 1, 2, 3]


def test_single_point(rng):
    d = lhs(1, 7, rng)
    assert d.shape == (1, 7)
    assert ((d > 0) & (d < 1)).all()


def test_deterministic():
    a = lhs(10, 3, np.random.default_rng(5))
    b = lhs(10, 3, np.random.default_rng(5))
    assert np.array_equal(a, b)


def test_seeds_differ():
    a = lhs(10, 3, np.random.default_rng(5))
    b = lhs(10, 3, np.random.default_rng(6))
    assert not np.array_equal(a, b)


@pytest.mark.parametrize("n0,m", [(0, 2), (3, 0), (-1, 1), (2.5, 1)])
def test_bad_sizes(n0, m, rng):
    with pytest.raises(ValueError):
        lhs(n0, m, rng)


@given(st.integers(1, 50), st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_stratification_property(n0, m, seed):
    d = lhs(n0, m, np.random.default_rng(seed))
    assert stratified(d)
    assert ((d > 0) & (d < 1)).all()


def test_default_initial_size():
    assert default_initial_size(5, 100) == 12
    assert default_initial_size(40, 100) == 50
    assert default_initial_size(3, 3) == 1
