import numpy as np
import pytest

from conftest import make_instance, random_instance
from dspopt.solver.dual import oracle
from dspopt.solver.objective import planned_spend, profit
from dspopt.solver.primal import (
    build_phase2_lp,
    greedy_allocate,
    relative_gap,
    solve_lp,
    two_phase,
)
from dspopt.utility.synth import GeneratorConfig, generate


def test_phase2_lp_coefficients():
    instance = make_instance(
        supply=[10.0],
        budgets=[1.0],
        cpc=[2.0],
        edges=[(0, 0, 0.5)],
        markets=[(1, 1.0)],
    )
    lp = build_phase2_lp(instance, np.array([0.5]))
    # r = 1, b_hat = 0.5, uniform competitor: rho = 0.5, P = 0.125
    np.testing.assert_allclose(lp.bid_prices, [0.5])
    np.testing.assert_allclose(lp.objective, [10.0 * (0.5 - 0.125)])
    np.testing.assert_allclose(lp.budget_coef, [10.0 * 0.5])
    c, A, b = lp.to_dense()
    np.testing.assert_allclose(A, [[5.0], [1.0]])
    np.testing.assert_allclose(b, [1.0, 1.0])

    result = solve_lp(lp)
    np.testing.assert_allclose(result.x, [0.2])
    assert result.objective == pytest.approx(0.2 * 3.75)


def test_weak_duality_sandwich(random_instances):
    for instance in random_instances:
        plan = two_phase(instance, {"max_iters": 200})
        assert plan.primal_value <= plan.dual_bound + 1e-9
        assert plan.gap_abs == pytest.approx(
            plan.dual_bound - plan.primal_value
        )
        mass = np.bincount(
            instance.edge_i, weights=plan.x_hat, minlength=instance.n_types
        )
        assert np.all(mass <= 1.0 + 1e-12)
        assert np.all(plan.x_hat >= 0.0)
        spend = planned_spend(instance, plan.x_hat, plan.b_hat)
        assert np.all(spend <= instance.budget + 1e-6)
        np.testing.assert_allclose(plan.spend, spend)


def test_truthful_regime():
    for seed in range(10):
        base = random_instance(seed)
        if base.n_edges == 0:
            continue
        unconstrained = oracle(base, np.zeros(base.n_campaigns)).spend
        instance = make_instance(
            supply=base.supply,
            budgets=10.0 * unconstrained + 1.0,
            cpc=base.cpc,
            edges=[(e.i, e.k, e.ctr) for e in base.edges],
            markets=[
                (l.market_size, l.quality) for l in base.landscapes
            ],
        )
        plan = two_phase(instance, {"max_iters": 100})
        np.testing.assert_array_equal(plan.lam, 0.0)
        np.testing.assert_array_equal(plan.b_hat, instance.ecpi)
        assert plan.gap <= 1e-6
        scores = oracle(instance, plan.lam).edge_scores
        greedy = greedy_allocate(instance, scores)
        # edges whose score is below the pricing tolerance may differ
        tol = 1e-6 * max(1.0, float(np.max(scores)))
        assert np.all(np.abs(plan.x_hat - greedy) * scores <= tol)
        assert np.all(np.abs(plan.x_hat - greedy)[scores > tol] <= 1e-9)


def test_profit_of_empty_plan_is_zero():
    instance = random_instance(5)
    zeros = np.zeros(instance.n_edges)
    assert profit(instance, zeros, instance.ecpi) == 0.0
    with pytest.raises(ValueError):
        profit(instance, np.zeros(instance.n_edges + 1), instance.ecpi)


def test_relative_gap():
    assert relative_gap(1.2, 1.0) == pytest.approx(0.2)
    assert relative_gap(0.0, 0.0) == 0.0
    assert relative_gap(1.0, 0.0) == float("inf")


@pytest.mark.slow
def test_example_a_gap_across_seeds():
    for seed in range(5):
        instance = generate(GeneratorConfig.from_preset("example-a", seed=seed))
        plan = two_phase(instance)
        assert plan.primal_value <= plan.dual_bound + 1e-6
        assert plan.gap <= 0.20
