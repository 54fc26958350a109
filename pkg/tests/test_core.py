import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from weakpareto.core import (
    FrontBounds,
    IndexSet,
    cone_dominates,
    dominates,
    index_sets,
    nondominated_filter,
    simplex_lattice,
)


def test_dominates_examples():
    assert dominates((1, 2), (2, 2))
    assert not dominates((1, 1), (1, 1))
    assert not dominates((0, 3), (3, 0))


def test_dominates_dimension_mismatch():
    with pytest.raises(ValueError):
        dominates((1, 2), (1, 2, 3))


def test_cone_dominance_example():
    u, v, delta = (0, 10), (1, 1), (0.25, 0.25)
    assert cone_dominates(v, u, delta)
    assert not cone_dominates(u, v, delta)
    assert not cone_dominates((0, 1), (0, 1), delta)


def test_nondominated_filter_examples():
    out = nondominated_filter(np.array([[1, 2], [2, 1], [2, 2]]))
    assert sorted(map(tuple, out)) == [(1, 2), (2, 1)]
    assert nondominated_filter(np.array([[3.0, 4.0]])).tolist() == [[3.0, 4.0]]
    assert len(nondominated_filter(np.zeros((2, 2)))) == 2


vectors = arrays(np.float64, 3, elements=st.floats(-10, 10, allow_nan=False))


@given(vectors, vectors)
def test_dominance_is_asymmetric(u, v):
    assert not (dominates(u, v) and dominates(v, u))


@given(vectors, vectors, st.floats(0, 0.9))
def test_pareto_dominance_implies_cone_dominance(u, v, delta):
    if dominates(u, v):
        assert cone_dominates(u, v, [delta] * 3)


@settings(max_examples=50)
@given(arrays(np.float64, (12, 3), elements=st.floats(0, 1, allow_nan=False)))
def test_filter_output_is_mutually_nondominated(points):
    front = nondominated_filter(points)
    for a in front:
        assert not any(dominates(b, a) for b in points)


def test_bounds_roundtrip_and_validation():
    b = FrontBounds(np.array([1.0, 2.0]), np.array([3.0, 6.0]))
    z = np.array([2.0, 5.0])
    np.testing.assert_allclose(b.normalize(z), [0.5, 0.75])
    np.testing.assert_allclose(b.denormalize(b.normalize(z)), z)
    with pytest.raises(ValueError):
        FrontBounds(np.array([1.0]), np.array([1.0]))


def test_index_sets():
    assert IndexSet.parse("2,1").members == (0, 1)
    assert IndexSet((2, 0)).label() == "1,3"
    assert len(index_sets(5, 2)) == 10
    assert IndexSet((0,)).complement(3) == (1, 2)


@pytest.mark.parametrize("m,h,count", [(3, 12, 91), (4, 8, 165), (2, 4, 5)])
def test_simplex_lattice(m, h, count):
    pts = simplex_lattice(m, h)
    assert pts.shape == (count, m)
    np.testing.assert_allclose(pts.sum(axis=1), 1.0)
    assert len(np.unique(pts, axis=0)) == count
