import os
import sys

import numpy as np
import pytest

sys.path.insert(
    0, os.path.join(os.path.dirname(os.path.dirname(__file__)), "py_src")
)

from dspopt.model.instance import (  # noqa: E402
    CampaignSpec,
    Edge,
    ImpressionTypeSpec,
    Instance,
)
from dspopt.model.landscape import BinomialMaxUniformLandscape  # noqa: E402


def make_instance(supply, budgets, cpc, edges, markets):
    """
    @param supply:  s_i per impression type
    @param budgets: m_k per campaign
    @param cpc:     q_k per campaign
    @param edges:   [(i, k, ctr), ...]
    @param markets: [(M, Q), ...] per impression type
    """
    landscapes = [
        BinomialMaxUniformLandscape(m, q, landscape_id="L{}".format(i))
        for i, (m, q) in enumerate(markets)
    ]
    types = [
        ImpressionTypeSpec("i{}".format(i), float(s), "L{}".format(i))
        for i, s in enumerate(supply)
    ]
    campaigns = [
        CampaignSpec(
            "k{}".format(k),
            float(m),
            float(q),
            tuple(sorted(i for i, kk, _ in edges if kk == k)),
        )
        for k, (m, q) in enumerate(zip(budgets, cpc))
    ]
    return Instance(
        types,
        campaigns,
        [Edge(int(i), int(k), float(ctr)) for i, k, ctr in edges],
        landscapes,
    )


def random_instance(
    seed, max_types=10, max_campaigns=10, max_edges=None, budget=(0.1, 20.0),
    max_supply=100.0,
):
    rng = np.random.default_rng(seed)
    n_types = int(rng.integers(1, max_types + 1))
    n_campaigns = int(rng.integers(1, max_campaigns + 1))
    pairs = [
        (i, k)
        for i in range(n_types)
        for k in range(n_campaigns)
        if rng.random() < 0.5
    ]
    if max_edges is not None and len(pairs) > max_edges:
        keep = np.sort(rng.choice(len(pairs), size=max_edges, replace=False))
        pairs = [pairs[n] for n in keep]
    edges = [(i, k, float(rng.uniform(0.1, 1.0))) for i, k in pairs]
    return make_instance(
        supply=rng.uniform(1.0, max_supply, n_types),
        budgets=rng.uniform(budget[0], budget[1], n_campaigns),
        cpc=rng.uniform(0.5, 2.0, n_campaigns),
        edges=edges,
        markets=[
            (int(rng.integers(1, 11)), float(rng.uniform(0.05, 0.8)))
            for _ in range(n_types)
        ],
    )


@pytest.fixture
def two_campaign_instance():
    """
    One impression type targeted by two campaigns, r = (0.3, 0.6).
    """
    return make_instance(
        supply=[10.0],
        budgets=[2.0, 2.0],
        cpc=[1.0, 1.0],
        edges=[(0, 0, 0.3), (0, 1, 0.6)],
        markets=[(10, 0.5)],
    )


@pytest.fixture
def random_instances():
    return [random_instance(seed) for seed in range(100)]
