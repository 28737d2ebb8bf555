import json

import numpy as np
import pytest

from dspopt.config import cfg
from dspopt.planner import InvalidInstanceError, TwoPhasePlanner
from dspopt.utility import io
from dspopt.utility.synth import GeneratorConfig, generate


@pytest.fixture
def instance():
    return generate(GeneratorConfig(n_impression_types=6, n_campaigns=9, seed=4))


def test_defaults_follow_config():
    planner = TwoPhasePlanner()
    assert planner.max_iters == cfg.SOLVER.MAX_ITERS
    assert planner.step_scale == cfg.SOLVER.STEP_SCALE
    assert planner.runs == cfg.SIMULATION.RUNS
    assert planner.workers == cfg.SIMULATION.WORKERS
    assert planner.config == {
        "max_iters": cfg.SOLVER.MAX_ITERS,
        "step_scale": cfg.SOLVER.STEP_SCALE,
        "seed": cfg.SOLVER.SEED,
    }


@pytest.mark.parametrize(
    "name, value",
    [
        ("max_iters", 0),
        ("max_iters", 2.5),
        ("step_scale", 0.0),
        ("step_scale", -1.0),
        ("runs", 0),
        ("base_seed", -1),
        ("workers", 0),
    ],
)
def test_setters_reject(name, value):
    planner = TwoPhasePlanner()
    with pytest.raises(ValueError, match="TwoPhasePlanner"):
        setattr(planner, name, value)


def test_setters_accept():
    planner = TwoPhasePlanner()
    planner.max_iters = 20
    planner.step_scale = 0.05
    planner.step_scale = None
    planner.runs = 3
    planner.base_seed = 0
    planner.workers = 2
    assert (planner.max_iters, planner.runs, planner.workers) == (20, 3, 2)
    assert planner.step_scale is None


def test_load_instance_from_path_or_object(instance, tmp_path):
    path = str(tmp_path / "instance.json")
    io.write_instance(path, instance)

    planner = TwoPhasePlanner()
    loaded = planner.load_instance(path)
    np.testing.assert_array_equal(loaded.ecpi, instance.ecpi)
    assert planner.load_instance(instance) is instance
    with pytest.raises(TypeError):
        planner.load_instance(42)


def test_load_invalid_instance(tmp_path):
    doc = {
        "impression_types": [{"id": "i", "s": 1.0, "landscape": "L"}],
        "campaigns": [{"id": "k", "budget": -1.0, "cpc": 1.0, "targets": ["i"]}],
        "edges": [{"i": "i", "k": "k", "ctr": 0.5}],
        "landscapes": [
            {"id": "L", "kind": "binomial_max_uniform", "params": {"M": 1, "Q": 0.5}}
        ],
    }
    path = tmp_path / "neg.json"
    path.write_text(json.dumps(doc))
    planner = TwoPhasePlanner()
    with pytest.raises(InvalidInstanceError) as error:
        planner.load_instance(str(path))
    assert not error.value.report.ok
    assert planner.instance is None


def test_order_of_calls(instance, tmp_path):
    planner = TwoPhasePlanner()
    with pytest.raises(RuntimeError):
        planner.solve()
    with pytest.raises(RuntimeError):
        planner.load_plan(str(tmp_path / "plan.json"))
    planner.load_instance(instance)
    with pytest.raises(RuntimeError):
        planner.save_plan(str(tmp_path / "plan.json"))
    with pytest.raises(RuntimeError):
        planner.simulate(runs=1)
    # greedy alone needs no plan
    report = planner.simulate(runs=1, challenger="greedy")
    assert report.runs == 1


def test_solve_save_load_simulate(instance, tmp_path):
    path = str(tmp_path / "plan.json")
    planner = TwoPhasePlanner()
    planner.max_iters = 100
    planner.runs = 2
    planner.load_instance(instance)

    solved = planner.solve()
    assert solved.primal_value <= solved.dual_bound + 1e-9
    planner.save_plan(path)
    with pytest.raises(FileExistsError):
        planner.save_plan(path)
    first = io.sanitize(planner.simulate().to_dict())

    again = TwoPhasePlanner()
    again.runs = 2
    again.load_instance(instance)
    loaded = again.load_plan(path)
    np.testing.assert_array_equal(loaded.lam, solved.lam)
    np.testing.assert_array_equal(loaded.x_hat, solved.x_hat)
    np.testing.assert_array_equal(loaded.b_hat, solved.b_hat)
    assert loaded.primal_value == solved.primal_value
    assert io.sanitize(again.simulate().to_dict()) == first


def test_new_instance_drops_plan(instance):
    planner = TwoPhasePlanner()
    planner.max_iters = 10
    planner.load_instance(instance)
    planner.solve()
    planner.load_instance(instance)
    assert planner.plan is None
