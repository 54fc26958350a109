import numpy as np
import pytest

from weakpareto.core import IndexSet
from weakpareto.problems import CaseStudyFront, GeneratorParams, ProblemInstance, catalog
from weakpareto.wpb import (
    WpbDescriptor,
    boundary_share,
    count_drs,
    distance_to_wpb,
    drs_positions,
    enumerate_wpbs,
    sample_wpb,
)


def test_enumeration_counts():
    assert len(enumerate_wpbs(catalog("EMOP1"))) == 6
    assert [d.nu for d in enumerate_wpbs(catalog("EMOP1"))] == [1, 1, 1, 2, 2, 2]
    assert len(enumerate_wpbs(catalog("EMOP2", m=5))) == 30
    assert enumerate_wpbs(ProblemInstance(GeneratorParams(m=3, ell=0.0))) == []


def test_case_study_distance_example():
    front = CaseStudyFront(3, 1.0)
    sample = sample_wpb(WpbDescriptor(front, IndexSet((0, 1))), resolution=400)
    h = 0.1 / np.sqrt(2)
    assert distance_to_wpb(np.array([0.5 + h, 0.5 + h, 1.3]), sample) == pytest.approx(0.1, abs=2e-3)


def test_points_on_wpb_have_zero_distance():
    sample = sample_wpb(enumerate_wpbs(catalog("EMOP2"))[4], resolution=30)
    pts = sample.points
    assert np.max(distance_to_wpb(pts, sample)) < 1e-9


def test_resolution_two_keeps_corners():
    front = CaseStudyFront(3, 1.0)
    sample = sample_wpb(WpbDescriptor(front, IndexSet((0, 1))), resolution=2)
    pts = sample.normalized_points()
    for corner in ([1, 0, 1], [0, 1, 1], [1, 0, 2], [0, 1, 2]):
        assert np.any(np.all(np.isclose(pts, corner), axis=1))
    with pytest.raises(ValueError):
        sample_wpb(WpbDescriptor(front, IndexSet((0, 1))), resolution=1)


@pytest.mark.parametrize("name", ["EMOP1", "EMOP3", "EMOP5", "EMOP14", "MOPW6"])
def test_samples_are_weakly_but_not_strictly_optimal(name):
    inst = catalog(name)
    for desc in enumerate_wpbs(inst):
        sample = sample_wpb(desc, resolution=12)
        zbar = sample.normalized_points()
        np.testing.assert_allclose(inst.front.total_deficit(zbar), 1.0, atol=1e-9)
        assert np.all(zbar >= -1e-12)
        inner = zbar[sample.interior_mask(zbar, tol=1e-6)]
        # moving down along any free objective stays feasible, so these are not Pareto-optimal
        for j in desc.free:
            moved = inner.copy()
            moved[:, j] -= 1e-7
            assert np.all(inst.front.contains_normalized(moved))


def test_count_drs():
    inst = catalog("EMOP2")
    samples = [sample_wpb(d, resolution=40) for d in enumerate_wpbs(inst)]
    assert count_drs([], samples) == {1: 0, 2: 0}
    on_wpb = samples[3].points
    on_wpb = on_wpb[samples[3].interior_mask(inst.bounds.normalize(on_wpb))][:50]
    counts = count_drs([on_wpb], samples)
    assert counts[2] == len(on_wpb)
    off = on_wpb + 0.3
    assert count_drs([off], samples, threshold=0.0) == {1: 0, 2: 0}


def test_boundary_share_and_positions():
    front = CaseStudyFront(3, 1.0)
    z = np.array([[0.5, 0.5, 1.5], [1.0, 0.0, 1.5], [0.25, 0.75, 1.5]])
    np.testing.assert_allclose(boundary_share(front, z), [0.5, 0.0, 0.75])
    sample = sample_wpb(WpbDescriptor(front, IndexSet((0, 1))), resolution=50)
    pos = drs_positions([z, np.array([[0.5, 0.5, 1.01]])], sample)
    np.testing.assert_allclose(np.sort(pos), [0.0, 0.5, 0.75])
