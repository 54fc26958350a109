import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from weakpareto.problems import (
    CATALOG_NAMES,
    CaseStudyFront,
    GeneratorParams,
    ProblemInstance,
    case_study_membership,
    catalog,
    clip_to_d,
    distance_function,
    format_config,
    g1_position,
    g2_position,
    parse_config,
    simplex_projection,
)


def test_simplex_projection_examples():
    np.testing.assert_allclose(simplex_projection([1, 1, 1]), [1 / 3] * 3)
    np.testing.assert_allclose(simplex_projection([0, 0, 0]), [1 / 3] * 3)
    np.testing.assert_allclose(simplex_projection([1, 0, 0]), [1, 0, 0])


def test_clip_to_d_examples():
    np.testing.assert_allclose(clip_to_d(np.full(3, 1 / 3), 0.5), [1 / 3] * 3)
    np.testing.assert_allclose(clip_to_d(np.array([1.0, 0, 0]), 0.5), [0.5, 0.25, 0.25])


@given(
    arrays(np.float64, 4, elements=st.floats(0, 1, allow_nan=False)),
    st.floats(1 / 3, 1.0),
)
def test_clip_to_d_sums_to_one_and_respects_cap(x, d):
    y = clip_to_d(simplex_projection(x), d)
    assert abs(y.sum() - 1) < 1e-12
    assert np.all(y <= d + 1e-12)


def test_position_examples():
    prm = GeneratorParams(m=3, d=0.5, p=1)
    np.testing.assert_allclose(g1_position([1, 1, 1], prm), [2 / 3] * 3)
    np.testing.assert_allclose(g1_position([1, 0, 0], prm), [1, 0.5, 0.5])
    np.testing.assert_allclose(g1_position([1, 0, 0], GeneratorParams(m=3, d=0.5, p=2)), [1, 0.25, 0.25])
    g2 = GeneratorParams(m=3, d=0.5, p=1, gap=1)
    np.testing.assert_allclose(g2_position([1, 1, 1], g2), [1 / 6] * 3)
    np.testing.assert_allclose(g2_position([0.2, 0.3, 0.5], GeneratorParams(m=3, d=0.5, gap=0)), [0.2, 0.3, 0.5])


def test_distance_function_examples():
    assert distance_function(0.5, 4) == 0
    assert distance_function(1.0, 4) == 4
    np.testing.assert_array_equal(distance_function(np.array([0.0, 0.3, 1.0]), 0.0), 0.0)


def test_evaluate_example_and_errors():
    inst = catalog("EMOP2")
    np.testing.assert_allclose(inst.evaluate(np.array([1, 1, 1, 0.5, 0.5, 0.5])), [2 / 3] * 3)
    with pytest.raises(ValueError):
        inst.evaluate(np.ones(5))


def test_catalog_entries():
    e5 = catalog("EMOP5").params
    assert e5.generator == "G1" and np.all(e5.p == 1) and np.all(e5.ell == 40) and np.all(e5.d == 0.7)
    w10 = catalog("MOPW10").params
    assert np.all(w10.p == 0.5) and w10.ell.tolist() == [4, 400, 40000] and np.all(w10.d == 0.7)
    e14 = catalog("EMOP14").params
    assert e14.generator == "G2" and np.all(e14.p == 2) and np.all(e14.gap == 1) and np.all(e14.d == 0.5)
    with pytest.raises(KeyError, match="EMOP1"):
        catalog("NOPE")


def test_case_study_membership_examples():
    front = CaseStudyFront(3, 1.0)
    assert case_study_membership(front, np.array([0.3, 0.9, 1.2]))
    assert not case_study_membership(front, np.array([0.3, 0.3, 5.0]))
    assert case_study_membership(front, np.array([0.0, 1.0, 1.0]))


@pytest.mark.parametrize("name", [n for n in CATALOG_NAMES if n != "MOPW12"])
def test_pf_lies_on_front_and_reaches_nadir(name):
    inst = catalog(name)
    pf = inst.sample_pf(30)
    total = inst.front.total_deficit(inst.bounds.normalize(pf))
    np.testing.assert_allclose(total, 1.0, atol=1e-9)
    np.testing.assert_allclose(pf.max(axis=0), inst.bounds.nadir, rtol=0.02)
    np.testing.assert_allclose(pf.min(axis=0), inst.bounds.ideal, atol=1e-9)


@pytest.mark.parametrize("name", ["EMOP1", "EMOP15", "MOPW11"])
def test_config_roundtrip(name):
    inst = catalog(name)
    back = parse_config(format_config(inst))
    assert back.name == inst.name
    x = np.random.default_rng(0).random((20, inst.n))
    np.testing.assert_array_equal(back.evaluate(x), inst.evaluate(x))


def test_parse_config_errors():
    with pytest.raises(ValueError):
        parse_config("m = 3\nbogus = 1\n")
    with pytest.raises(ValueError):
        parse_config("p = 1\n")


def test_position_only_has_no_distance():
    inst = ProblemInstance(GeneratorParams(m=3, ell=4), "x")
    x = np.random.default_rng(1).random((10, inst.n))
    z = inst.position_only().evaluate(x)
    np.testing.assert_allclose(inst.front.total_deficit(inst.bounds.normalize(z)), 1.0)
