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
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
import logging
from typing import Dict, List

import numpy as np

from ..model.instance import Instance
from .policy import PolicyState, run_greedy_policy, run_lagrangian_policy
from .trace import generate_trace

logger = logging.getLogger(__name__)

LAGRANGIAN = "lagrangian"
GREEDY = "greedy"
POLICIES = (LAGRANGIAN, GREEDY)
METRICS = ("profit", "cost", "revenue", "budget_util", "margin")
RELATIVES = ("profit", "cost", "revenue")


@dataclass
class RunRecord:
    run: int
    seed: int
    arrivals: int
    # the challenger, greedy itself in self-comparison mode
    lagrangian: PolicyState
    greedy: PolicyState

    def relative(self, metric):
        """
        @return challenger / greedy for metric, nan when greedy's is 0
        """
        baseline = getattr(self.greedy, metric)
        if baseline == 0:
            return float("nan")
        return getattr(self.lagrangian, metric) / baseline


def _mean_and_stderr(values):
    values = np.asarray(values, dtype=np.float64)
    values = values[~np.isnan(values)]
    if values.size == 0:
        return float("nan"), float("nan")
    if values.size == 1:
        return float(values[0]), 0.0
    stderr = np.std(values, ddof=1) / np.sqrt(values.size)
    return float(np.mean(values)), float(stderr)


@dataclass
class SimulationReport:
    challenger: str
    records: List[RunRecord] = field(default_factory=list)

    @property
    def runs(self):
        return len(self.records)

    @property
    def included(self):
        return [rec for rec in self.records if rec.greedy.profit != 0]

    @property
    def excluded_runs(self):
        return self.runs - len(self.included)

    def relative(self, metric):
        """
        @return (mean, standard error) of the per-run relative metric over
            runs where greedy profit is nonzero
        """
        return _mean_and_stderr([rec.relative(metric) for rec in self.included])

    def policy_means(self, policy):
        states = [getattr(rec, policy) for rec in self.records]
        summaries = [state.summary() for state in states]
        return {
            metric: float(np.mean([s[metric] for s in summaries]))
            if summaries
            else 0.0
            for metric in METRICS
        }

    def to_dict(self):
        result = {
            "runs": self.runs,
            "excluded_runs": self.excluded_runs,
            "challenger": self.challenger,
        }
        for metric in RELATIVES:
            mean, stderr = self.relative(metric)
            result["mean_rel_" + metric] = mean
            result["stderr_rel_" + metric] = stderr
        result["policies"] = {
            policy: self.policy_means(policy) for policy in POLICIES
        }
        return result

    def csv_rows(self):
        """
        @return header, rows of (run, policy, profit, cost, revenue,
            budget_util, margin)
        """
        header = ("run",) + ("policy",) + METRICS
        rows = []
        for rec in self.records:
            for policy in POLICIES:
                summary = getattr(rec, policy).summary()
                rows.append(
                    (rec.run, policy) + tuple(summary[m] for m in METRICS)
                )
        return header, rows


def paired_run(
    instance: Instance, plan, run: int, base_seed: int = 0, challenger=LAGRANGIAN
) -> RunRecord:
    """
    One trace, seeded base_seed + run, consumed by both policies.
    """
    seed = base_seed + run
    trace = generate_trace(instance, seed)
    if challenger == LAGRANGIAN:
        first = run_lagrangian_policy(instance, plan, trace)
    else:
        first = run_greedy_policy(instance, trace)
    return RunRecord(
        run=run,
        seed=seed,
        arrivals=len(trace),
        lagrangian=first,
        greedy=run_greedy_policy(instance, trace),
    )


def paired_experiment(
    instance: Instance,
    plan,
    runs: int,
    base_seed: int = 0,
    challenger: str = LAGRANGIAN,
    workers: int = 1,
) -> SimulationReport:
    """
    Runs r = 1..runs, each on the trace seeded base_seed + r.

    @param challenger: "lagrangian" runs the plan against greedy; "greedy"
        runs greedy against itself (every relative is 1)
    @param workers: > 1 spreads runs over processes; records stay in run
        order so the report does not depend on it

    Usage:
        report = paired_experiment(instance, plan, runs=500)
        report.to_dict()["mean_rel_profit"]
    """
    if int(runs) < 1:
        raise ValueError("paired_experiment: runs should be >= 1")
    if challenger not in POLICIES:
        raise ValueError(
            "paired_experiment: {!r} is not a valid challenger".format(
                challenger
            )
        )
    if int(workers) < 1:
        raise ValueError("paired_experiment: workers should be >= 1")

    run_ids = range(1, int(runs) + 1)
    job = partial(
        paired_run,
        instance,
        plan,
        base_seed=int(base_seed),
        challenger=challenger,
    )
    if workers == 1:
        records = [job(run) for run in run_ids]
    else:
        chunk = max(1, int(runs) // (4 * int(workers)))
        with ProcessPoolExecutor(max_workers=int(workers)) as executor:
            records = list(executor.map(job, run_ids, chunksize=chunk))

    report = SimulationReport(challenger=challenger, records=records)
    if report.excluded_runs:
        logger.warning(
            "paired_experiment: %d of %d runs have zero greedy profit",
            report.excluded_runs,
            report.runs,
        )
    logger.info(
        "paired_experiment: %d runs, mean relative profit %.4f",
        report.runs,
        report.relative("profit")[0],
    )
    return report
