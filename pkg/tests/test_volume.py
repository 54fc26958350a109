import numpy as np
import pytest

from weakpareto.core import FrontBounds, IndexSet
from weakpareto.problems import CaseStudyFront
from weakpareto.volume import (
    EnclosedRegionSpec,
    crossing_point,
    delta_sweep,
    growth_order,
    midline_sweep,
    polytope_vertices,
    fan_volume,
    sweep_reference,
    volume_exact_linear,
    volume_limit_pinf,
    volume_limit_pzero,
    volume_monte_carlo,
    volume_scalarized,
)

UNIT3 = FrontBounds.unit(3)


def spec(p, r, m=3):
    return EnclosedRegionSpec(CaseStudyFront(m, p), np.asarray(r, dtype=float))


def test_closed_form_limits():
    assert volume_limit_pinf(np.ones(3), UNIT3) == pytest.approx(1.0)
    assert volume_limit_pinf(np.array([0.5, 1.3, 1.3]), UNIT3) == pytest.approx(0.845)
    assert volume_limit_pinf(np.array([0.0, 1.3, 1.3]), UNIT3) == 0
    assert volume_limit_pzero(np.array([0.5, 1.2, 1.2]), UNIT3) == pytest.approx(0.02)
    assert volume_limit_pzero(np.full(3, 0.5), UNIT3) == 0
    assert volume_limit_pzero(np.full(3, 1.1), UNIT3) == pytest.approx(0.031)


def test_unit_cube_vertices():
    A = np.vstack([np.eye(3), -np.eye(3)])
    b = np.concatenate([np.ones(3), np.zeros(3)])
    verts = polytope_vertices(A, b)
    assert len(verts) == 8
    assert fan_volume(verts) == pytest.approx(1.0)


def test_exact_simplex_corner():
    # reference at the nadir: the region is the corner sum(z) >= 2 of the unit cube
    assert volume_exact_linear(spec(1.0, np.ones(3))).value == pytest.approx(1 / 6)


def test_exact_requires_linear_front():
    with pytest.raises(ValueError):
        volume_exact_linear(spec(2.0, np.ones(3)))


def test_exact_matches_monte_carlo():
    s = spec(1.0, [0.6, 0.6, 1.2])
    ex = volume_exact_linear(s).value
    mc = volume_monte_carlo(s, n_samples=200_000, seed=1)
    assert abs(ex - mc.value) < 3 * mc.std_error


def test_monte_carlo_all_feasible_and_degenerate():
    est = volume_monte_carlo(spec(np.inf, [2.0, 2.0, 2.0]), n_samples=10_000, seed=0, box="ideal")
    assert est.std_error == 0 and est.value == pytest.approx(8.0)
    assert volume_monte_carlo(spec(1.0, [0.0, 2.0, 2.0]), n_samples=100).value == 0


def test_monte_carlo_is_seeded():
    s = spec(0.5, [0.6, 0.6, 1.2])
    assert volume_monte_carlo(s, 50_000, seed=3) == volume_monte_carlo(s, 50_000, seed=3)


def test_large_p_approaches_box_limit():
    est = volume_monte_carlo(spec(50.0, [0.9, 0.9, 0.9]), n_samples=200_000, seed=0)
    assert est.value == pytest.approx(0.729, rel=0.02)


def test_scalarized_box_front():
    est = volume_scalarized(spec(np.inf, [0.5, 1.3, 1.3]), n_directions=50_000, seed=0)
    assert abs(est.value - 0.845) < 3 * est.std_error


def test_sweep_starts_at_zero_and_grows():
    front = CaseStudyFront(3, 1.0)
    curve = delta_sweep(front, 2, deltas=[0.0, 0.05, 0.1, 0.2], method="exact")
    assert curve.values[0] == pytest.approx(0.0, abs=1e-12)
    assert np.all(np.diff(curve.values) > 0)
    assert len(curve.rows()) == 4


def test_sweep_reference_distance():
    front = CaseStudyFront(3, 1.0)
    r = sweep_reference(front, IndexSet((0, 1)), 0.1, 1.3)
    np.testing.assert_allclose(r, [0.5 + 0.1 / np.sqrt(2)] * 2 + [1.3])


def test_midline_sweep_endpoints():
    front = CaseStudyFront(3, 1.0)
    curve = midline_sweep(front, IndexSet((0, 1)), 0.1, [0.0, 0.5], method="exact")
    assert curve.values[0] == pytest.approx(curve.values[1], rel=1e-6)
    with pytest.raises(ValueError):
        midline_sweep(front, IndexSet((0, 1)), 0.1, [1.5])


def test_growth_order_and_crossing():
    x = np.geomspace(1e-3, 1e-1, 6)
    assert growth_order((x, x**2)) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        growth_order((x[:2], x[:2]))
    xs = np.linspace(0, 1, 11)
    assert crossing_point(xs, xs, 0.5 * np.ones(11)) == pytest.approx(0.5)
    assert np.isnan(crossing_point(xs, xs, xs - 1))
