import time

import numpy as np
import pytest
from scipy import stats

from conftest import make_instance
from dspopt.simulation.experiment import paired_experiment
from dspopt.solver.dual import oracle
from dspopt.solver.primal import two_phase
from dspopt.utility.synth import GeneratorConfig, generate, generate_sweep

pytestmark = pytest.mark.slow


def _relative_profit(preset, seed, runs):
    instance = generate(GeneratorConfig.from_preset(preset, seed=seed))
    plan = two_phase(instance)
    return paired_experiment(instance, plan, runs, base_seed=seed)


def test_example_a():
    report = _relative_profit("example-a", 1, 200)
    mean_profit, _ = report.relative("profit")
    mean_cost, _ = report.relative("cost")
    mean_revenue, _ = report.relative("revenue")
    assert mean_profit >= 1.10
    assert mean_cost <= 0.60
    assert mean_revenue <= 1.00
    assert (
        report.policy_means("lagrangian")["margin"]
        > report.policy_means("greedy")["margin"]
    )


def test_example_b_beats_example_a():
    a = _relative_profit("example-a", 1, 200).relative("profit")[0]
    b = _relative_profit("example-b", 1, 200).relative("profit")[0]
    assert b > a


def test_sweep_improvement_shrinks_with_budget():
    config = GeneratorConfig.from_preset("sweep", seed=1)
    budgets, means = [], []
    for budget, instance in generate_sweep(config):
        plan = two_phase(instance)
        report = paired_experiment(instance, plan, 200, base_seed=1)
        budgets.append(budget)
        means.append(report.relative("profit")[0])
    assert means[0] > means[-1]
    assert stats.spearmanr(budgets, means).correlation < 0


def _oracle_seconds(instance, repeats=5, number=10):
    lam = np.full(instance.n_campaigns, 0.3)
    # first call builds the per-edge landscape batch
    oracle(instance, lam)
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        for _ in range(number):
            oracle(instance, lam)
        best = min(best, (time.perf_counter() - start) / number)
    return best


def test_oracle_time_is_linear_in_edges():
    # fixed per-call cost, measured on a single edge
    baseline = _oracle_seconds(
        make_instance(
            supply=[5000.0],
            budgets=[50.0],
            cpc=[1.0],
            edges=[(0, 0, 0.3)],
            markets=[(10, 0.5)],
        )
    )
    edges, seconds = [], []
    # about 50 edges per impression type: |E| near 10^3, 10^4, 10^5
    for n in (20, 200, 2000):
        config = GeneratorConfig(n_impression_types=n, n_campaigns=100, seed=0)
        instance = generate(config)
        edges.append(instance.n_edges)
        seconds.append(_oracle_seconds(instance) - baseline)
    assert min(seconds) > 0.0
    exponent = np.polyfit(np.log(edges), np.log(seconds), 1)[0]
    assert 0.8 <= exponent <= 1.2
