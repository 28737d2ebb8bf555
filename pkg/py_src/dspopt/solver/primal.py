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
import logging
from typing import Optional

import numpy as np

from ..config import cfg, solver_config
from ..model.instance import Instance
from .dual import DualState, check_multipliers, solve_dual
from .greedy import greedy_allocate  # noqa: F401  (re-exported)
from .objective import planned_spend, profit
from .simplex import LPResult, revised_simplex

logger = logging.getLogger(__name__)


@dataclass
class StructuredLP:
    """
    maximize    sum_E objective_e x_e
    subject to  sum_{e in I_k} budget_coef_e x_e <= budget_rhs_k   (|K| rows)
                sum_{e in K_i} x_e <= 1                            (|I| rows)
                x >= 0
    """

    objective: np.ndarray
    budget_coef: np.ndarray
    budget_rhs: np.ndarray
    edge_i: np.ndarray
    edge_k: np.ndarray
    n_types: int
    bid_prices: np.ndarray

    @property
    def n_vars(self):
        return self.objective.size

    @property
    def n_campaigns(self):
        return self.budget_rhs.size

    @property
    def n_rows(self):
        return self.n_campaigns + self.n_types

    def to_dense(self):
        """
        @return (c, A, b), budget rows first, then supply rows
        """
        n = self.n_vars
        A = np.zeros((self.n_rows, n))
        columns = np.arange(n)
        A[self.edge_k, columns] = self.budget_coef
        A[self.n_campaigns + self.edge_i, columns] = 1.0
        b = np.concatenate([self.budget_rhs, np.ones(self.n_types)])
        return self.objective.copy(), A, b


@dataclass
class PlanSolution:
    lam: np.ndarray
    x_hat: np.ndarray
    b_hat: np.ndarray
    primal_value: float
    dual_bound: float
    gap: float
    gap_abs: float
    spend: np.ndarray
    dual: Optional[DualState] = None
    lp: Optional[LPResult] = None


def build_phase2_lp(instance: Instance, lambda_hat) -> StructuredLP:
    """
    Fix b_hat = (1 - lambda_hat_k) r_ik and keep problem (1) in x.

    objective_ik   = [r_ik - beta_i(b_hat_ik)] s_i rho_i(b_hat_ik)
    budget_coef_ik = r_ik s_i rho_i(b_hat_ik)
    """
    lam = check_multipliers(instance, lambda_hat, "build_phase2_lp")
    r = instance.ecpi
    s = instance.edge_supply
    bids = (1.0 - lam[instance.edge_k]) * r

    batch = instance.edge_landscapes
    rho = batch.win_prob(bids)
    objective = s * (r * rho - batch.partial_mean(bids))

    return StructuredLP(
        objective=objective,
        budget_coef=r * s * rho,
        budget_rhs=instance.budget.copy(),
        edge_i=np.asarray(instance.edge_i),
        edge_k=np.asarray(instance.edge_k),
        n_types=instance.n_types,
        bid_prices=bids,
    )


def _clean_allocation(lp: StructuredLP, x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    mass = np.bincount(lp.edge_i, weights=x, minlength=lp.n_types)
    over = mass > 1.0
    if np.any(over):
        excess = float(np.max(mass[over]) - 1.0)
        if excess > cfg.TOL.SUPPLY:
            logger.warning("solve_lp: supply row exceeded by %.3g", excess)
        scale = np.ones(lp.n_types)
        scale[over] = 1.0 / mass[over]
        x = x * scale[lp.edge_i]
    return x


def solve_lp(lp: StructuredLP) -> LPResult:
    """
    Optimal basic solution of the Phase-2 LP with its row duals.
    result.x is clamped into [0, 1] with every supply row summing to <= 1.

    Usage:
        result = solve_lp(build_phase2_lp(instance, lambda_hat))
        x_hat = result.x
    """
    if lp.n_vars == 0:
        return LPResult(
            x=np.zeros(0),
            duals=np.zeros(lp.n_rows),
            objective=0.0,
            iterations=0,
            primal_residual=0.0,
            dual_residual=0.0,
            cs_residual=0.0,
        )

    c, A, b = lp.to_dense()
    result = revised_simplex(c, A, b)
    if not result.certified:
        logger.warning(
            "solve_lp: certificate residuals primal=%.3g dual=%.3g cs=%.3g",
            result.primal_residual,
            result.dual_residual,
            result.cs_residual,
        )
    result.x = _clean_allocation(lp, result.x)
    result.objective = float(c @ result.x)
    logger.info(
        "solve_lp: %d vars, %d rows, %d pivots, objective %.6f",
        lp.n_vars, lp.n_rows, result.iterations, result.objective,
    )
    return result


def relative_gap(dual_bound: float, primal_value: float) -> float:
    """
    @return (D - pi) / pi; 0 when both vanish, inf when only pi does
    """
    gap_abs = dual_bound - primal_value
    if primal_value > 0:
        return gap_abs / primal_value
    if abs(gap_abs) <= cfg.TOL.SUPPLY:
        return 0.0
    return float("inf")


def two_phase(instance: Instance, config=None) -> PlanSolution:
    """
    Phase 1: lambda_hat, D_hat from the dual solver.
    Phase 2: bids b_hat = (1 - lambda_hat) r, allocation x_hat from the LP.

    Usage:
        plan = two_phase(instance, {"max_iters": 1000})
        plan.primal_value <= plan.dual_bound
    """
    config = solver_config(config)
    state = solve_dual(instance, config)
    lp = build_phase2_lp(instance, state.best_lambda)
    result = solve_lp(lp)

    x_hat = result.x
    b_hat = lp.bid_prices
    primal_value = profit(instance, x_hat, b_hat)
    dual_bound = state.best_value
    if primal_value > dual_bound + 1e-9 * max(1.0, abs(dual_bound)):
        logger.warning(
            "two_phase: primal %.9g above dual bound %.9g",
            primal_value, dual_bound,
        )

    plan = PlanSolution(
        lam=state.best_lambda,
        x_hat=x_hat,
        b_hat=b_hat,
        primal_value=primal_value,
        dual_bound=dual_bound,
        gap=relative_gap(dual_bound, primal_value),
        gap_abs=dual_bound - primal_value,
        spend=planned_spend(instance, x_hat, b_hat),
        dual=state,
        lp=result,
    )
    logger.info(
        "two_phase: primal %.6f, dual bound %.6f, gap %.4f",
        primal_value, dual_bound, plan.gap,
    )
    return plan
