import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakpareto.core import dominates
from weakpareto.evolve import (
    EvolutionConfig,
    crowding_distance,
    decomposition_weights,
    g_gen,
    nondominated_ranks,
    polynomial_mutation,
    run,
    sbx_crossover,
)
from weakpareto.problems import catalog


def test_variation_with_zero_probability_is_identity():
    rng = np.random.default_rng(0)
    a, b = rng.random(6), rng.random(6)
    c1, c2 = sbx_crossover(a, b, prob=0.0, rng=1)
    np.testing.assert_array_equal(c1, a)
    np.testing.assert_array_equal(c2, b)
    np.testing.assert_array_equal(polynomial_mutation(a, prob=0.0, rng=1), a)


def test_identical_parents_give_identical_children():
    a = np.full(5, 0.3)
    c1, c2 = sbx_crossover(a, a.copy(), rng=2)
    np.testing.assert_array_equal(c1, a)
    np.testing.assert_array_equal(c2, a)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_sbx_children_stay_in_bounds_and_keep_midpoint(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.random((4, 7)), rng.random((4, 7))
    c1, c2 = sbx_crossover(a, b, rng=seed)
    assert np.all((c1 >= 0) & (c1 <= 1) & (c2 >= 0) & (c2 <= 1))
    inside = (c1 > 0) & (c1 < 1) & (c2 > 0) & (c2 < 1)
    np.testing.assert_allclose((c1 + c2)[inside], (a + b)[inside])


def test_mutation_rate():
    x = np.full((2000, 10), 0.5)
    y = polynomial_mutation(x, prob=0.1, rng=3)
    assert np.mean(y != x) == pytest.approx(0.1, abs=0.01)


def test_g_gen_examples():
    assert g_gen([2, 4], [0.5, 0.5], [0, 0], 0.05) == pytest.approx(2.15)
    assert g_gen([2, 4], [0.5, 0.25], [1, 1], 0.0) == pytest.approx(0.75)
    assert g_gen([1, 1], [0.3, 0.7], [1, 1], 0.2) == 0


def test_ranks_and_crowding():
    F = np.array([[0, 1], [1, 0], [1, 1], [2, 2]], dtype=float)
    np.testing.assert_array_equal(nondominated_ranks(F), [0, 0, 1, 2])
    d = crowding_distance(np.array([[0, 2], [1, 1], [2, 0]], dtype=float))
    assert np.isinf(d[0]) and np.isinf(d[2]) and d[1] == pytest.approx(2.0)


def test_decomposition_weights_sizes():
    assert len(decomposition_weights(3, 91)) == 91
    assert len(decomposition_weights(4, 165)) == 165
    assert len(decomposition_weights(3, 100)) == 91


@pytest.mark.parametrize("selection", ["pareto_crowding", "cone_crowding", "decomposition"])
def test_run_is_deterministic_and_in_bounds(selection):
    inst = catalog("EMOP2")
    cfg = EvolutionConfig(population_size=20, max_evaluations=400, seed=7, selection=selection)
    a, b = run(inst, cfg), run(inst, cfg)
    assert a.generations == len(b.snapshots)
    for fa, fb in zip(a.snapshots, b.snapshots):
        np.testing.assert_array_equal(fa, fb)
    assert np.all((a.final_population >= 0) & (a.final_population <= 1))
    assert a.evaluations <= 400
    np.testing.assert_array_equal(inst.evaluate(a.final_population), a.final_objectives)


def test_budget_too_small():
    with pytest.raises(ValueError):
        run(catalog("EMOP2"), EvolutionConfig(population_size=20, max_evaluations=30))


def test_elitism_keeps_nondominated_points():
    rec = run(catalog("EMOP2"), EvolutionConfig(population_size=20, max_evaluations=600, seed=1))
    for prev, cur in zip(rec.snapshots[:-1], rec.snapshots[1:]):
        for z in prev[nondominated_ranks(prev) == 0]:
            assert any(dominates(c, z) or np.array_equal(c, z) for c in cur) or len(
                cur[nondominated_ranks(cur) == 0]
            ) == len(cur)


def test_config_validation():
    with pytest.raises(ValueError):
        EvolutionConfig(selection="random")
    with pytest.raises(ValueError):
        EvolutionConfig(delta=1.0)
    cfg = EvolutionConfig().resolved(3, 6)
    assert (cfg.population_size, cfg.max_evaluations) == (91, 50_000)
    assert cfg.mutation_prob == pytest.approx(1 / 6)
