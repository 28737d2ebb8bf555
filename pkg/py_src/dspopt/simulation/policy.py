"""
MIT License

Copyright (c) 2020 dspopt developers

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""
from dataclasses import dataclass

import numpy as np

from ..config import cfg
from ..model.instance import Instance
from ..solver.greedy import segment_argmax
from .trace import ArrivalTrace


@dataclass
class PolicyState:
    # per campaign
    remaining_budget: np.ndarray
    clicks: np.ndarray
    spend: np.ndarray
    auctions_entered: np.ndarray
    auctions_won: np.ndarray
    cost_by_campaign: np.ndarray
    # totals
    profit: float
    cost: float
    revenue: float
    total_budget: float

    @property
    def budget_utilization(self):
        """
        total revenue / sum_k m_k
        """
        if self.total_budget > 0:
            return self.revenue / self.total_budget
        return 0.0

    @property
    def profit_margin(self):
        """
        total profit / total revenue, 0 without revenue
        """
        if self.revenue > 0:
            return self.profit / self.revenue
        return 0.0

    def summary(self):
        return {
            "profit": self.profit,
            "cost": self.cost,
            "revenue": self.revenue,
            "budget_util": self.budget_utilization,
            "margin": self.profit_margin,
        }


# first window of arrivals evaluated per vectorized step
WINDOW = 4096


def click_capacity(budget: np.ndarray, cpc: np.ndarray) -> np.ndarray:
    """
    A campaign is depleted once its remaining budget m_k - q_k * clicks
    falls below q_k, so it can pay for at most the largest c with
    m_k - c q_k >= 0 clicks.
    """
    budget = np.asarray(budget, dtype=np.float64)
    cpc = np.asarray(cpc, dtype=np.float64)
    capacity = np.floor(budget / cpc)
    capacity = np.where(budget - capacity * cpc < 0, capacity - 1, capacity)
    capacity = np.where(budget - capacity * cpc >= cpc, capacity + 1, capacity)
    return np.maximum(capacity, 0).astype(np.int64)


def _simulate(instance: Instance, trace: ArrivalTrace, choose, bids):
    """
    Runs the auction/click pipeline over the trace.

    choose(depleted, lo, hi) returns the chosen edge (or -1) for arrivals
    lo..hi-1 given the current depletion mask. Choices only change when a
    campaign depletes, so the trace is processed in vectorized windows that
    end at the next depletion.
    """
    n = len(trace)
    edge_k = instance.edge_k
    clicks_left = click_capacity(instance.budget, instance.cpc)
    depleted = clicks_left <= 0

    chosen = np.full(n, -1, dtype=np.int64)
    won = np.zeros(n, dtype=bool)
    clicked = np.zeros(n, dtype=bool)

    start = 0 if instance.n_edges else n
    window = WINDOW
    while start < n:
        end = min(n, start + window)
        edge = choose(depleted, start, end)
        active = edge >= 0
        safe = np.where(active, edge, 0)
        win = active & (bids[safe] >= trace.max_bids[start:end])
        click = win & (trace.click_uniforms[start:end] < instance.ctr[safe])

        click_pos = np.flatnonzero(click)
        click_k = edge_k[edge[click_pos]]
        by_campaign = np.argsort(click_k, kind="stable")
        sorted_k = click_k[by_campaign]
        ordinal = np.empty(click_k.size, dtype=np.int64)
        ordinal[by_campaign] = np.arange(click_k.size) - np.searchsorted(
            sorted_k, sorted_k, side="left"
        )
        # the click that uses up a campaign's last affordable click
        last = np.flatnonzero(ordinal == clicks_left[click_k] - 1)
        stop = end - start
        if last.size:
            stop = int(np.min(click_pos[last])) + 1
            window = max(WINDOW, window // 2)
        else:
            window *= 2

        chosen[start : start + stop] = edge[:stop]
        won[start : start + stop] = win[:stop]
        clicked[start : start + stop] = click[:stop]
        clicks_left -= np.bincount(
            click_k[click_pos < stop], minlength=instance.n_campaigns
        )
        depleted = clicks_left <= 0
        start += stop

    n_campaigns = instance.n_campaigns
    entered_k = edge_k[chosen[chosen >= 0]]
    won_k = edge_k[chosen[won]]
    clicked_k = edge_k[chosen[clicked]]
    payments = trace.max_bids[won]

    clicks = np.bincount(clicked_k, minlength=n_campaigns)
    cost = float(np.sum(payments))
    revenue = float(np.sum(instance.cpc[clicked_k]))
    return PolicyState(
        remaining_budget=instance.budget - instance.cpc * clicks,
        clicks=clicks,
        spend=instance.cpc * clicks,
        auctions_entered=np.bincount(entered_k, minlength=n_campaigns),
        auctions_won=np.bincount(won_k, minlength=n_campaigns),
        cost_by_campaign=np.bincount(
            won_k, weights=payments, minlength=n_campaigns
        ),
        profit=revenue - cost,
        cost=cost,
        revenue=revenue,
        total_budget=float(np.sum(instance.budget)),
    )


def check_plan_rows(instance: Instance, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (instance.n_edges,):
        raise ValueError("policy: plan needs one allocation entry per edge")
    if np.any(np.isnan(x)) or np.any(x < -1e-12):
        raise ValueError("policy: plan allocation has negative entries")
    mass = np.bincount(instance.edge_i, weights=x, minlength=instance.n_types)
    if np.any(mass > 1.0 + cfg.TOL.SUPPLY):
        raise ValueError("policy: plan row mass exceeds 1")
    return np.maximum(x, 0.0)


def sample_campaign_edges(instance: Instance, x, types, uniforms) -> np.ndarray:
    """
    Draws k~ from {x_ik}_k plus the null mass 1 - sum_k x_ik for each
    arrival, by inverting the cumulative row of its type.

    @return chosen edge per arrival, -1 for the null campaign
    """
    types = np.asarray(types, dtype=np.int64)
    if instance.n_edges == 0:
        return np.full(types.size, -1, dtype=np.int64)
    order = instance.order_i
    ptr = instance.ptr_i
    cumulative = np.cumsum(x[order])
    base = np.concatenate([[0.0], cumulative])[ptr[:-1]]
    pos = np.searchsorted(cumulative, uniforms + base[types], side="right")
    inside = pos < ptr[types + 1]
    return np.where(inside, order[np.minimum(pos, order.size - 1)], -1)


def run_lagrangian_policy(instance: Instance, plan, trace: ArrivalTrace):
    """
    Per arrival of type i: draw k~ from x_hat (null campaign or a depleted
    campaign => no bid), bid b_hat_ik~, pay the competing max when it does
    not exceed the bid, and on a click charge q_k~ to campaign k~.

    @param plan: anything with x_hat and b_hat per edge (PlanSolution)
    """
    x = check_plan_rows(instance, plan.x_hat)
    bids = np.asarray(plan.b_hat, dtype=np.float64)
    if bids.shape != (instance.n_edges,):
        raise ValueError("policy: plan needs one bid price per edge")
    sampled = sample_campaign_edges(
        instance, x, trace.types, trace.select_uniforms
    )

    def choose(depleted, lo, hi):
        edge = sampled[lo:hi]
        blocked = (edge >= 0) & depleted[instance.edge_k[np.maximum(edge, 0)]]
        return np.where(blocked, -1, edge)

    return _simulate(instance, trace, choose, bids)


def run_greedy_policy(instance: Instance, trace: ArrivalTrace):
    """
    Per arrival of type i: the non-depleted campaign of K_i with the largest
    eCPI r_ik (lowest index on ties) bids r_ik.
    """
    r = instance.ecpi

    def choose(depleted, lo, hi):
        scores = np.where(depleted[instance.edge_k], -np.inf, r)
        best = segment_argmax(instance, scores)
        return best[trace.types[lo:hi]]

    return _simulate(instance, trace, choose, r)
