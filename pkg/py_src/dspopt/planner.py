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
import logging
from typing import Union

from .config import cfg
from .model.instance import Instance, validate
from .simulation.experiment import LAGRANGIAN, paired_experiment
from .solver.primal import PlanSolution, two_phase
from .utility import io

logger = logging.getLogger(__name__)


class InvalidInstanceError(ValueError):
    """
    Raised by load_instance. The ValidationReport is kept on `report`.
    """

    def __init__(self, report):
        super(InvalidInstanceError, self).__init__(
            "TwoPhasePlanner: invalid instance\n" + str(report)
        )
        self.report = report


class TwoPhasePlanner:
    """
    Usage:
        planner = TwoPhasePlanner()
        planner.max_iters = 2000
        planner.load_instance("a.json")
        plan = planner.solve()
        print(plan.primal_value, plan.dual_bound, plan.gap)
        report = planner.simulate(runs=200)
    """

    def __init__(self):
        """
        Default configuration
        """
        self.max_iters = cfg.SOLVER.MAX_ITERS
        self.step_scale = cfg.SOLVER.STEP_SCALE
        self.seed = cfg.SOLVER.SEED
        self.runs = cfg.SIMULATION.RUNS
        self.base_seed = cfg.SIMULATION.BASE_SEED
        self.workers = cfg.SIMULATION.WORKERS
        self.instance = None
        self.plan = None

    @property
    def max_iters(self):
        """
        Usage:
            planner.max_iters = 1000
        """
        return self._max_iters

    @max_iters.setter
    def max_iters(self, value: int):
        if int(value) != value or value < 1:
            raise ValueError("TwoPhasePlanner: Set max_iters to a positive integer")
        self._max_iters = int(value)

    @property
    def step_scale(self):
        """
        None picks 1 / ||g(0)|| on every solve.

        Usage:
            planner.step_scale = 0.05
            planner.step_scale = None
        """
        return self._step_scale

    @step_scale.setter
    def step_scale(self, value: Union[float, None]):
        if value is not None and not value > 0:
            raise ValueError("TwoPhasePlanner: Set step_scale to a positive value")
        self._step_scale = None if value is None else float(value)

    @property
    def runs(self):
        return self._runs

    @runs.setter
    def runs(self, value: int):
        if int(value) != value or value < 1:
            raise ValueError("TwoPhasePlanner: Set runs to a positive integer")
        self._runs = int(value)

    @property
    def base_seed(self):
        return self._base_seed

    @base_seed.setter
    def base_seed(self, value: int):
        if int(value) != value or value < 0:
            raise ValueError("TwoPhasePlanner: Set base_seed to an integer >= 0")
        self._base_seed = int(value)

    @property
    def workers(self):
        return self._workers

    @workers.setter
    def workers(self, value: int):
        if int(value) != value or value < 1:
            raise ValueError("TwoPhasePlanner: Set workers to a positive integer")
        self._workers = int(value)

    @property
    def config(self):
        return {
            "max_iters": self.max_iters,
            "step_scale": self.step_scale,
            "seed": self.seed,
        }

    def load_instance(self, instance: Union[str, Instance]):
        """
        Usage:
            planner.load_instance("a.json")
            planner.load_instance(generate(config))
        """
        if isinstance(instance, str):
            instance = io.read_instance(instance)
        elif not isinstance(instance, Instance):
            raise TypeError("TwoPhasePlanner: Set an instance path or Instance")
        report = validate(instance)
        for warning in report.warnings:
            logger.info("load_instance: %s", warning)
        if not report.ok:
            raise InvalidInstanceError(report)
        self.instance = instance
        self.plan = None
        return instance

    def _require_instance(self):
        if self.instance is None:
            raise RuntimeError("TwoPhasePlanner: Load an instance first")

    def _require_plan(self):
        if self.plan is None:
            raise RuntimeError("TwoPhasePlanner: Solve or load a plan first")

    def solve(self) -> PlanSolution:
        self._require_instance()
        self.plan = two_phase(self.instance, self.config)
        return self.plan

    def save_plan(self, path: str, force: bool = False):
        """
        Usage:
            planner.save_plan("plan.json", force=True)
        """
        self._require_instance()
        self._require_plan()
        io.write_plan(path, self.plan, self.instance, force=force)

    def load_plan(self, path: str) -> PlanSolution:
        self._require_instance()
        self.plan = io.read_plan(path, self.instance)
        return self.plan

    def simulate(self, runs: int = None, challenger: str = LAGRANGIAN):
        """
        Usage:
            report = planner.simulate()
            report = planner.simulate(runs=1, challenger="greedy")
        """
        self._require_instance()
        if challenger == LAGRANGIAN:
            self._require_plan()
        if runs is not None:
            self.runs = runs
        return paired_experiment(
            self.instance,
            self.plan,
            self.runs,
            base_seed=self.base_seed,
            challenger=challenger,
            workers=self.workers,
        )
