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
from dataclasses import dataclass, field
import logging
import math
from typing import List, Tuple

import numpy as np

from ..config import solver_config
from ..model.instance import Instance
from .greedy import greedy_allocate

logger = logging.getLogger(__name__)


@dataclass
class OracleOutput:
    # per edge
    bid_prices: np.ndarray
    edge_scores: np.ndarray
    allocation: np.ndarray
    win_prob: np.ndarray
    # per campaign
    spend: np.ndarray
    subgradient: np.ndarray
    dual_value: float


@dataclass
class DualState:
    lam: np.ndarray
    dual_value: float
    subgradient: np.ndarray
    best_lambda: np.ndarray
    best_value: float
    iteration: int = 0
    step_scale: float = 1.0
    # (iteration, dual_value, step_size, ||g||)
    trajectory: List[Tuple[int, float, float, float]] = field(
        default_factory=list
    )


def check_multipliers(instance: Instance, lam, name: str = "oracle"):
    """
    @return lambda as Dim(|K|) float64, inside [0, 1]^K
    """
    lam = np.asarray(lam, dtype=np.float64)
    if lam.shape != (instance.n_campaigns,):
        raise ValueError(
            "{}: lambda must have one entry per campaign".format(name)
        )
    if np.any(np.isnan(lam)) or np.any(lam < 0.0) or np.any(lam > 1.0):
        raise ValueError("{}: lambda must lie in [0, 1]^K".format(name))
    return lam


def oracle(instance: Instance, lam) -> OracleOutput:
    """
    Maximizer of L(x, b, lambda) over x in S, b >= 0 and a subgradient of
    L* at lambda, in O(|E|).

    1. b*_ik = (1 - lambda_k) r_ik
       pi_ik = [b*_ik - beta_i(b*_ik)] s_i rho_i(b*_ik)
    2. x* = greedy over pi
    3. g_k = m_k - sum_{i in I_k} r_ik s_i x*_ik rho_i(b*_ik)

    Usage:
        out = oracle(instance, np.zeros(instance.n_campaigns))
        out.dual_value, out.subgradient
    """
    lam = check_multipliers(instance, lam, "oracle")
    r = instance.ecpi
    s = instance.edge_supply
    bids = (1.0 - lam[instance.edge_k]) * r

    batch = instance.edge_landscapes
    rho = batch.win_prob(bids)
    scores = s * (bids * rho - batch.partial_mean(bids))

    x = greedy_allocate(instance, scores)
    spend = np.bincount(
        instance.edge_k, weights=r * s * x * rho, minlength=instance.n_campaigns
    )
    subgradient = instance.budget - spend
    dual_value = float(np.sum(scores * x)) + float(np.dot(lam, instance.budget))

    return OracleOutput(
        bid_prices=bids,
        edge_scores=scores,
        allocation=x,
        win_prob=rho,
        spend=spend,
        subgradient=subgradient,
        dual_value=dual_value,
    )


def dual_value(instance: Instance, lam) -> float:
    """
    @return L*(lambda)
    """
    return oracle(instance, lam).dual_value


def solve_dual(instance: Instance, config=None) -> DualState:
    """
    Projected subgradient descent on min L*(lambda) s.t. 0 <= lambda <= 1.

    lambda^0 = 0, lambda^(t + 1) = clip(lambda^t - eta_t g(lambda^t)),
    eta_t = step_scale / sqrt(t + 1). The lowest-value iterate is returned.

    @param config: {"max_iters": 5000, "step_scale": None, "seed": 0}
        step_scale None => 1 / ||g(0)||_2

    Usage:
        state = solve_dual(instance, {"max_iters": 500})
        state.best_lambda, state.best_value
    """
    config = solver_config(config)
    max_iters = int(config.max_iters)
    if max_iters <= 0:
        raise ValueError("solve_dual: max_iters must be positive")

    lam = np.zeros(instance.n_campaigns)
    out = oracle(instance, lam)

    step_scale = config.step_scale
    if step_scale is None:
        norm = float(np.linalg.norm(out.subgradient))
        step_scale = 1.0 / norm if norm > 0 else 1.0
    step_scale = float(step_scale)
    if not step_scale > 0:
        raise ValueError("solve_dual: step_scale must be positive")

    state = DualState(
        lam=lam,
        dual_value=out.dual_value,
        subgradient=out.subgradient,
        best_lambda=lam.copy(),
        best_value=out.dual_value,
        step_scale=step_scale,
    )

    for t in range(max_iters):
        if t > 0:
            out = oracle(instance, lam)
        state.lam = lam
        state.dual_value = out.dual_value
        state.subgradient = out.subgradient
        state.iteration = t + 1
        if out.dual_value < state.best_value:
            state.best_value = out.dual_value
            state.best_lambda = lam.copy()

        step = step_scale / math.sqrt(t + 1)
        norm = float(np.linalg.norm(out.subgradient))
        state.trajectory.append((t, out.dual_value, step, norm))
        if t % 100 == 0:
            logger.debug(
                "iteration %d: L*=%.6f best=%.6f ||g||=%.4g",
                t, out.dual_value, state.best_value, norm,
            )

        lam = np.clip(lam - step * out.subgradient, 0.0, 1.0)

    logger.info(
        "dual solved: %d iterations, best L*=%.6f", max_iters, state.best_value
    )
    return state
