from hypothesis import given, strategies as st
import numpy as np
import pytest

from conftest import make_instance, random_instance
from dspopt.solver.greedy import greedy_allocate, segment_argmax


def _one_type(n_campaigns):
    return make_instance(
        supply=[1.0],
        budgets=[1.0] * n_campaigns,
        cpc=[1.0] * n_campaigns,
        edges=[(0, k, 0.5) for k in range(n_campaigns)],
        markets=[(1, 0.5)],
    )


def test_picks_largest_positive_score():
    instance = _one_type(3)
    x = greedy_allocate(instance, np.array([0.2, 0.7, 0.1]))
    np.testing.assert_array_equal(x, [0.0, 1.0, 0.0])


def test_tie_goes_to_lowest_index():
    instance = _one_type(2)
    x = greedy_allocate(instance, np.array([0.5, 0.5]))
    np.testing.assert_array_equal(x, [1.0, 0.0])


def test_nonpositive_scores_allocate_nothing():
    instance = _one_type(2)
    np.testing.assert_array_equal(
        greedy_allocate(instance, np.array([0.0, -1.0])), [0.0, 0.0]
    )


def test_wrong_shape_rejected():
    with pytest.raises(ValueError):
        greedy_allocate(_one_type(2), np.zeros(3))


def test_excluded_edges():
    instance = _one_type(3)
    best = segment_argmax(instance, np.array([-np.inf, 0.1, 0.3]))
    assert list(best) == [2]
    best = segment_argmax(instance, np.full(3, -np.inf))
    assert list(best) == [-1]


def test_tie_order_follows_campaign_index_not_edge_order():
    instance = make_instance(
        supply=[1.0],
        budgets=[1.0, 1.0],
        cpc=[1.0, 1.0],
        edges=[(0, 1, 0.5), (0, 0, 0.5)],
        markets=[(1, 0.5)],
    )
    x = greedy_allocate(instance, np.array([0.4, 0.4]))
    # edge 1 belongs to campaign 0
    np.testing.assert_array_equal(x, [0.0, 1.0])


@given(st.integers(min_value=0, max_value=10 ** 6))
def test_matches_loop(seed):
    instance = random_instance(seed)
    rng = np.random.default_rng(seed)
    scores = rng.normal(size=instance.n_edges)
    x = greedy_allocate(instance, scores)

    expected = np.zeros(instance.n_edges)
    for i in range(instance.n_types):
        edges = instance.edges_of_type(i)
        if edges.size == 0:
            continue
        best = edges[np.argmax(scores[edges])]
        if scores[best] > 0:
            expected[best] = 1.0
    np.testing.assert_array_equal(x, expected)
    mass = np.bincount(instance.edge_i, weights=x, minlength=instance.n_types)
    assert np.all(mass <= 1.0)
