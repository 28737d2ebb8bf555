import json

import numpy as np
import pytest

from conftest import random_instance
from dspopt.solver.primal import two_phase
from dspopt.utility import io
from dspopt.utility.synth import GeneratorConfig, generate


def _doc():
    return {
        "impression_types": [
            {"id": "news", "s": 100.0, "landscape": "L"},
            {"id": "sports", "s": 50.0, "landscape": "L"},
        ],
        "campaigns": [
            {"id": "a", "budget": 10.0, "cpc": 2.0, "targets": ["news"]},
            {"id": "b", "budget": 5.0, "cpc": 1.0, "targets": ["news", "sports"]},
        ],
        "edges": [
            {"i": "news", "k": "a", "ctr": 0.1},
            {"i": "news", "k": "b", "ctr": 0.2},
            {"i": "sports", "k": "b", "ctr": 0.3},
        ],
        "landscapes": [
            {"id": "L", "kind": "binomial_max_uniform", "params": {"M": 10, "Q": 0.5}}
        ],
    }


def test_external_ids_map_to_dense_indices():
    instance = io.instance_from_dict(_doc())
    np.testing.assert_array_equal(instance.edge_i, [0, 0, 1])
    np.testing.assert_array_equal(instance.edge_k, [0, 1, 1])
    assert instance.campaigns[1].targets == (0, 1)
    np.testing.assert_allclose(instance.ecpi, [0.2, 0.2, 0.3])
    assert io.instance_to_dict(instance) == _doc()


def test_round_trip_is_bitwise(tmp_path):
    instance = generate(
        GeneratorConfig(n_impression_types=6, n_campaigns=9, seed=4)
    )
    path = str(tmp_path / "instance.json")
    io.write_instance(path, instance)
    again = io.read_instance(path)
    for name in ("supply", "budget", "cpc", "ctr", "ecpi", "edge_i", "edge_k"):
        np.testing.assert_array_equal(getattr(again, name), getattr(instance, name))
    assert [l.quality for l in again.landscapes] == [
        l.quality for l in instance.landscapes
    ]
    doc = io.instance_to_dict(instance)
    assert all(set(edge) == {"i", "k", "ctr"} for edge in doc["edges"])


@pytest.mark.parametrize(
    "mutate, location",
    [
        (lambda d: d["campaigns"][1].update(extra=1), "campaigns[1]"),
        (lambda d: d.update(version=2), "instance"),
        (lambda d: d["campaigns"][1]["targets"].append("x"), "campaigns[1].targets[2]"),
        (lambda d: d["edges"][2].update(k="z"), "edges[2].k"),
        (lambda d: d["edges"][0].pop("ctr"), "edges[0]"),
        (lambda d: d["impression_types"][0].update(s="many"), "impression_types[0].s"),
        (lambda d: d["landscapes"][0].update(kind="normal"), "landscapes[0]"),
    ],
)
def test_format_errors_carry_location(mutate, location):
    doc = _doc()
    mutate(doc)
    with pytest.raises(io.InstanceFormatError) as error:
        io.instance_from_dict(doc)
    assert error.value.location == location


def test_plan_round_trip(tmp_path):
    instance = random_instance(5, budget=(0.5, 5.0))
    plan = two_phase(instance, {"max_iters": 50})
    path = str(tmp_path / "plan.json")
    io.write_plan(path, plan, instance)
    with open(path) as fd:
        doc = json.load(fd)
    assert set(doc) == {
        "lambda", "x", "b", "primal", "dual_bound", "gap", "gap_abs", "spend"
    }
    assert all(entry["v"] != 0 for entry in doc["x"])

    again = io.read_plan(path, instance)
    np.testing.assert_array_equal(again.x_hat, plan.x_hat)
    np.testing.assert_array_equal(again.b_hat, plan.b_hat)
    np.testing.assert_array_equal(again.lam, plan.lam)
    assert again.primal_value == plan.primal_value
    assert again.dual_bound == plan.dual_bound


def test_plan_for_other_instance_rejected(tmp_path):
    instance = random_instance(5)
    plan = two_phase(instance, {"max_iters": 10})
    doc = io.plan_to_dict(plan, instance)
    doc["b"].append(0.0)
    with pytest.raises(io.InstanceFormatError):
        io.plan_from_dict(doc, instance)


def test_outputs_need_force(tmp_path):
    path = str(tmp_path / "out.json")
    io.write_json(path, {"a": 1})
    with pytest.raises(FileExistsError):
        io.write_json(path, {"a": 2})
    io.write_json(path, {"a": 2}, force=True)
    assert io.read_json(path) == {"a": 2}


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(FileNotFoundError):
        io.read_instance(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(io.InstanceFormatError):
        io.read_instance(str(broken))


def test_csv_and_sanitize(tmp_path):
    path = str(tmp_path / "rows.csv")
    io.write_csv(path, ("a", "b"), [(1, 0.5), (2, float("nan"))])
    with open(path) as fd:
        assert fd.read() == "a,b\n1,0.5\n2,\n"
    assert io.sanitize({"x": [float("inf"), 1.0]}) == {"x": [None, 1.0]}
