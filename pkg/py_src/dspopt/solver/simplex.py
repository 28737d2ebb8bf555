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
import itertools
import logging

import numpy as np

from ..config import cfg

logger = logging.getLogger(__name__)


class SimplexError(RuntimeError):
    pass


class UnboundedError(SimplexError):
    "Raised when the objective grows without bound along an edge ray."


class InfeasibleError(SimplexError):
    "Raised when the starting slack basis is not feasible (b has b_r < 0)."


@dataclass
class LPResult:
    x: np.ndarray
    # row multipliers, y >= 0
    duals: np.ndarray
    objective: float
    iterations: int
    primal_residual: float
    dual_residual: float
    cs_residual: float

    @property
    def certified(self):
        tol = cfg.TOL.CS
        residuals = (self.primal_residual, self.dual_residual, self.cs_residual)
        return max(residuals) < tol


def certificate(c, A, b, x, y):
    """
    @return (primal, dual, complementary slackness) residuals of (x, y) for
        max c x s.t. A x <= b, x >= 0
    """
    slack = b - A @ x
    reduced = A.T @ y - c
    primal = max(
        float(np.max(-slack, initial=0.0)), float(np.max(-x, initial=0.0))
    )
    dual = max(
        float(np.max(-reduced, initial=0.0)), float(np.max(-y, initial=0.0))
    )
    cs = max(
        float(np.max(np.abs(y * slack), initial=0.0)),
        float(np.max(np.abs(x * reduced), initial=0.0)),
    )
    return primal, dual, cs


def revised_simplex(c, A, b, tol=None, max_iters=None, refactor_every=50):
    """
    Primal revised simplex for

        maximize c x  subject to  A x <= b, x >= 0,  with b >= 0

    starting from the slack basis. Entering columns follow Dantzig's rule;
    after a degenerate pivot Bland's rule takes over until the objective
    moves again. The basis inverse is refactorized every refactor_every
    pivots.

    @param c: Dim(n)
    @param A: Dim(m, n)
    @param b: Dim(m)

    @return LPResult with the optimal basic solution and its row duals

    Usage:
        result = revised_simplex(c, A, b)
        result.x, result.duals, result.objective
    """
    c = np.asarray(c, dtype=np.float64)
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    m, n = A.shape
    if c.shape != (n,) or b.shape != (m,):
        raise ValueError("revised_simplex: shapes of c, A and b do not match")
    if np.any(b < 0):
        raise InfeasibleError("revised_simplex: x = 0 is infeasible (b < 0)")
    if tol is None:
        tol = cfg.TOL.PIVOT
    if max_iters is None:
        max_iters = 50 * (m + n) + 100

    full = np.hstack([A, np.eye(m)])
    cost = np.concatenate([c, np.zeros(m)])
    basis = np.arange(n, n + m)
    is_basic = np.zeros(n + m, dtype=bool)
    is_basic[basis] = True
    binv = np.eye(m)
    x_basic = b.copy()
    # stays below TOL.CS so a converged basis passes its own certificate
    scale = max(1.0, float(np.max(np.abs(c), initial=0.0)))
    price_tol = min(tol * scale, 0.1 * cfg.TOL.CS)

    bland = False
    for iteration in itertools.count():
        if iteration >= max_iters:
            raise SimplexError(
                "revised_simplex: no optimum after {} pivots".format(max_iters)
            )

        y = cost[basis] @ binv
        reduced = cost - y @ full
        reduced[is_basic] = 0.0
        candidates = np.flatnonzero(reduced > price_tol)
        if candidates.size == 0:
            break

        if bland:
            j = candidates[0]
        else:
            j = candidates[np.argmax(reduced[candidates])]

        u = binv @ full[:, j]
        rising = u > tol
        if not np.any(rising):
            raise UnboundedError(
                "revised_simplex: column {} is an unbounded ray".format(j)
            )
        ratios = np.full(m, np.inf)
        ratios[rising] = x_basic[rising] / u[rising]
        theta = float(np.min(ratios))
        ties = np.flatnonzero(ratios <= theta + 1e-12 * max(1.0, theta))
        if bland:
            r = ties[np.argmin(basis[ties])]
        else:
            r = ties[np.argmax(u[ties])]
        theta = float(ratios[r])

        x_basic -= theta * u
        x_basic[r] = theta
        pivot_row = binv[r] / u[r]
        binv -= np.outer(u, pivot_row)
        binv[r] = pivot_row

        is_basic[basis[r]] = False
        basis[r] = j
        is_basic[j] = True

        bland = theta <= tol
        logger.debug(
            "pivot %d: in=%d out_row=%d theta=%.3g%s",
            iteration, j, r, theta, " (bland)" if bland else "",
        )

        if (iteration + 1) % refactor_every == 0:
            binv = np.linalg.inv(full[:, basis])
            x_basic = np.maximum(binv @ b, 0.0)

    binv = np.linalg.inv(full[:, basis])
    x_basic = np.maximum(binv @ b, 0.0)
    y = np.maximum(cost[basis] @ binv, 0.0)

    x_full = np.zeros(n + m)
    x_full[basis] = x_basic
    x = x_full[:n]
    primal, dual, cs = certificate(c, A, b, x, y)
    return LPResult(
        x=x,
        duals=y,
        objective=float(c @ x),
        iterations=iteration,
        primal_residual=primal,
        dual_residual=dual,
        cs_residual=cs,
    )
