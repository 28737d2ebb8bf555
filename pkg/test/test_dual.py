import itertools

import numpy as np
import pytest

from conftest import make_instance, random_instance
from dspopt.solver.dual import check_multipliers, dual_value, oracle, solve_dual
from dspopt.solver.objective import lagrangian, planned_spend, profit


def test_full_multipliers_bid_nothing():
    instance = random_instance(1)
    out = oracle(instance, np.ones(instance.n_campaigns))
    assert np.all(out.bid_prices == 0.0)
    assert np.all(out.allocation == 0.0)
    assert out.dual_value == pytest.approx(float(np.sum(instance.budget)))
    np.testing.assert_allclose(out.subgradient, instance.budget)


def test_zero_multipliers_bid_truthfully():
    instance = random_instance(2)
    out = oracle(instance, np.zeros(instance.n_campaigns))
    np.testing.assert_array_equal(out.bid_prices, instance.ecpi)
    assert out.dual_value == pytest.approx(
        profit(instance, out.allocation, out.bid_prices)
    )


def test_oracle_value_is_lagrangian_at_maximizer():
    for seed in range(10):
        instance = random_instance(seed)
        lam = np.random.default_rng(seed).uniform(0, 1, instance.n_campaigns)
        out = oracle(instance, lam)
        assert out.dual_value == pytest.approx(
            lagrangian(instance, out.allocation, out.bid_prices, lam)
        )
        np.testing.assert_allclose(
            out.subgradient,
            instance.budget
            - planned_spend(instance, out.allocation, out.bid_prices),
        )


def test_multipliers_outside_box_rejected():
    instance = random_instance(4)
    n = instance.n_campaigns
    with pytest.raises(ValueError):
        oracle(instance, np.full(n, 1.5))
    with pytest.raises(ValueError):
        oracle(instance, np.full(n, -0.1))
    with pytest.raises(ValueError):
        check_multipliers(instance, np.zeros(n + 1))


def _brute_force(instance, lam, grid):
    """
    max over x vertices of S and b on a grid of L(x, b, lambda)
    """
    s = instance.edge_supply
    per_edge = np.empty(instance.n_edges)
    for e in range(instance.n_edges):
        landscape = instance.landscape_of(int(instance.edge_i[e]))
        v = (1.0 - lam[instance.edge_k[e]]) * instance.ecpi[e]
        value = s[e] * (
            v * landscape.win_prob(grid) - landscape.partial_mean(grid)
        )
        per_edge[e] = np.max(value)

    options = [
        [None] + list(instance.edges_of_type(i)) for i in range(instance.n_types)
    ]
    best = -np.inf
    for choice in itertools.product(*options):
        total = sum(per_edge[e] for e in choice if e is not None)
        best = max(best, total)
    return best + float(np.dot(lam, instance.budget))


def test_oracle_matches_brute_force():
    grid = np.linspace(0.0, 2.0, 1001)
    for seed in range(20):
        instance = random_instance(
            100 + seed, max_types=3, max_campaigns=3, max_edges=4,
            max_supply=20.0,
        )
        rng = np.random.default_rng(seed)
        lam = rng.uniform(0, 1, instance.n_campaigns)
        exact = dual_value(instance, lam)
        brute = _brute_force(instance, lam, grid)
        assert exact >= brute - 1e-9
        assert exact - brute <= 1e-3


def test_subgradient_inequality():
    for seed in range(10):
        instance = random_instance(seed)
        rng = np.random.default_rng(seed)
        n = instance.n_campaigns
        for _ in range(100):
            lam = rng.uniform(0, 1, n)
            other = rng.uniform(0, 1, n)
            out = oracle(instance, lam)
            lhs = dual_value(instance, other)
            rhs = out.dual_value + float(out.subgradient @ (other - lam))
            assert lhs >= rhs - 1e-9


def test_dual_is_convex():
    for seed in range(10):
        instance = random_instance(seed)
        rng = np.random.default_rng(seed + 50)
        n = instance.n_campaigns
        for _ in range(20):
            a, b = rng.uniform(0, 1, n), rng.uniform(0, 1, n)
            t = rng.uniform()
            mid = dual_value(instance, t * a + (1 - t) * b)
            chord = t * dual_value(instance, a) + (1 - t) * dual_value(
                instance, b
            )
            assert mid <= chord + 1e-9 * max(1.0, abs(chord))


def test_single_campaign_reaches_grid_minimum():
    instance = make_instance(
        supply=[50.0, 80.0],
        budgets=[5.0],
        cpc=[1.0],
        edges=[(0, 0, 0.6), (1, 0, 0.9)],
        markets=[(10, 0.5), (5, 0.3)],
    )
    state = solve_dual(instance, {"max_iters": 2000})
    grid = min(dual_value(instance, [v]) for v in np.linspace(0, 1, 2001))
    assert state.best_value <= grid + 1e-3 * max(1.0, abs(grid))
    assert state.best_value >= grid - 1e-3 * max(1.0, abs(grid))


def test_loose_budgets_keep_truthful_bids():
    instance = random_instance(8, budget=(1e6, 2e6))
    state = solve_dual(instance, {"max_iters": 50})
    np.testing.assert_array_equal(state.best_lambda, 0.0)
    out = oracle(instance, np.zeros(instance.n_campaigns))
    assert state.best_value == out.dual_value


def test_trajectory_and_best_iterate():
    instance = random_instance(12, budget=(0.1, 1.0))
    state = solve_dual(instance, {"max_iters": 30, "step_scale": 0.05})
    assert len(state.trajectory) == 30
    assert state.iteration == 30
    assert state.step_scale == 0.05
    values = [row[1] for row in state.trajectory]
    assert state.best_value == min(values)
    first_step = state.trajectory[0][2]
    assert first_step == pytest.approx(0.05)
    assert state.trajectory[3][2] == pytest.approx(0.05 / 2.0)
    assert np.all((state.best_lambda >= 0) & (state.best_lambda <= 1))


@pytest.mark.parametrize("config", [{"max_iters": 0}, {"step_scale": -1.0}])
def test_bad_config_rejected(config):
    with pytest.raises(ValueError):
        solve_dual(random_instance(0), config)
