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
import csv
import json
import math
import os

import numpy as np

from ..model.instance import CampaignSpec, Edge, ImpressionTypeSpec, Instance
from ..model.landscape import from_record
from ..solver.primal import PlanSolution, relative_gap
from ..solver.objective import planned_spend

INSTANCE_KEYS = ("impression_types", "campaigns", "edges", "landscapes")
TYPE_KEYS = ("id", "s", "landscape")
CAMPAIGN_KEYS = ("id", "budget", "cpc", "targets")
EDGE_KEYS = ("i", "k", "ctr")
LANDSCAPE_KEYS = ("id", "kind", "params")
PLAN_KEYS = ("lambda", "x", "b", "primal", "dual_bound", "gap")
PLAN_OPTIONAL_KEYS = ("gap_abs", "spend")


class InstanceFormatError(ValueError):
    """
    A malformed instance or plan document. location names the offending
    element, e.g. "campaigns[3].targets[0]".
    """

    def __init__(self, location: str, message: str):
        super(InstanceFormatError, self).__init__(
            "{}: {}".format(location, message)
        )
        self.location = location
        self.message = message


def _check_keys(record, keys, location, optional=()):
    if not isinstance(record, dict):
        raise InstanceFormatError(location, "expected an object")
    unknown = set(record) - set(keys) - set(optional)
    if unknown:
        raise InstanceFormatError(
            location, "unknown keys {}".format(sorted(unknown))
        )
    missing = [key for key in keys if key not in record]
    if missing:
        raise InstanceFormatError(location, "missing keys {}".format(missing))


def _list(record, key, location):
    value = record[key]
    if not isinstance(value, list):
        raise InstanceFormatError(
            "{}.{}".format(location, key) if location else key,
            "expected an array",
        )
    return value


def _number(value, location):
    if value is None:
        return float("nan")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceFormatError(location, "expected a number")
    return float(value)


def _identifier(value, location):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InstanceFormatError(location, "expected a string or integer id")
    return value


def _id_table(records):
    table = {}
    for n, record in enumerate(records):
        table.setdefault(record["id"], n)
    return table


def _resolve(table, key, location):
    if isinstance(key, bool) or not isinstance(key, (str, int)):
        raise InstanceFormatError(location, "expected a string or integer id")
    if key not in table:
        raise InstanceFormatError(location, "unknown id {!r}".format(key))
    return table[key]


def instance_from_dict(doc) -> Instance:
    """
    External ids (strings or numbers) become dense 0-based indices in file
    order. r_ik is derived from cpc * ctr.
    """
    _check_keys(doc, INSTANCE_KEYS, "instance")
    for key in INSTANCE_KEYS:
        _list(doc, key, "")

    landscapes = []
    for n, record in enumerate(doc["landscapes"]):
        location = "landscapes[{}]".format(n)
        _check_keys(record, LANDSCAPE_KEYS, location)
        _identifier(record["id"], location + ".id")
        if not isinstance(record["params"], dict):
            raise InstanceFormatError(location + ".params", "expected an object")
        try:
            landscapes.append(from_record(record))
        except (KeyError, ValueError, TypeError) as error:
            raise InstanceFormatError(location, str(error)) from error

    impression_types = []
    for n, record in enumerate(doc["impression_types"]):
        location = "impression_types[{}]".format(n)
        _check_keys(record, TYPE_KEYS, location)
        impression_types.append(
            ImpressionTypeSpec(
                id=_identifier(record["id"], location + ".id"),
                supply=_number(record["s"], location + ".s"),
                landscape_ref=_identifier(
                    record["landscape"], location + ".landscape"
                ),
            )
        )
    type_index = _id_table(doc["impression_types"])

    campaigns = []
    for n, record in enumerate(doc["campaigns"]):
        location = "campaigns[{}]".format(n)
        _check_keys(record, CAMPAIGN_KEYS, location)
        targets = _list(record, "targets", location)
        campaigns.append(
            CampaignSpec(
                id=_identifier(record["id"], location + ".id"),
                budget=_number(record["budget"], location + ".budget"),
                cpc=_number(record["cpc"], location + ".cpc"),
                targets=tuple(
                    _resolve(
                        type_index,
                        target,
                        "{}.targets[{}]".format(location, t),
                    )
                    for t, target in enumerate(targets)
                ),
            )
        )
    campaign_index = _id_table(doc["campaigns"])

    edges = []
    for n, record in enumerate(doc["edges"]):
        location = "edges[{}]".format(n)
        _check_keys(record, EDGE_KEYS, location)
        edges.append(
            Edge(
                i=_resolve(type_index, record["i"], location + ".i"),
                k=_resolve(campaign_index, record["k"], location + ".k"),
                ctr=_number(record["ctr"], location + ".ctr"),
            )
        )

    return Instance(impression_types, campaigns, edges, landscapes)


def instance_to_dict(instance: Instance) -> dict:
    types = instance.impression_types
    campaigns = instance.campaigns
    return {
        "impression_types": [
            {"id": t.id, "s": t.supply, "landscape": t.landscape_ref}
            for t in types
        ],
        "campaigns": [
            {
                "id": c.id,
                "budget": c.budget,
                "cpc": c.cpc,
                "targets": [types[i].id for i in c.targets],
            }
            for c in campaigns
        ],
        "edges": [
            {"i": types[e.i].id, "k": campaigns[e.k].id, "ctr": e.ctr}
            for e in instance.edges
        ],
        "landscapes": [l.to_record() for l in instance.landscapes],
    }


def _finite_or_none(value):
    value = float(value)
    return value if math.isfinite(value) else None


def plan_to_dict(plan: PlanSolution, instance: Instance) -> dict:
    """
    x entries use dense indices and skip zeros; b is in edge order.
    """
    x = np.asarray(plan.x_hat)
    return {
        "lambda": [float(v) for v in plan.lam],
        "x": [
            {
                "i": int(instance.edge_i[e]),
                "k": int(instance.edge_k[e]),
                "v": float(x[e]),
            }
            for e in np.flatnonzero(x)
        ],
        "b": [float(v) for v in plan.b_hat],
        "primal": _finite_or_none(plan.primal_value),
        "dual_bound": _finite_or_none(plan.dual_bound),
        "gap": _finite_or_none(plan.gap),
        "gap_abs": _finite_or_none(plan.gap_abs),
        "spend": [float(v) for v in plan.spend],
    }


def plan_from_dict(doc, instance: Instance) -> PlanSolution:
    _check_keys(doc, PLAN_KEYS, "plan", optional=PLAN_OPTIONAL_KEYS)
    lam = np.array(
        [
            _number(v, "plan.lambda[{}]".format(n))
            for n, v in enumerate(_list(doc, "lambda", "plan"))
        ]
    )
    if lam.size != instance.n_campaigns:
        raise InstanceFormatError("plan.lambda", "expected one entry per campaign")
    b_hat = np.array(
        [
            _number(v, "plan.b[{}]".format(n))
            for n, v in enumerate(_list(doc, "b", "plan"))
        ]
    )
    if b_hat.size != instance.n_edges:
        raise InstanceFormatError("plan.b", "expected one entry per edge")

    x_hat = np.zeros(instance.n_edges)
    for n, entry in enumerate(_list(doc, "x", "plan")):
        location = "plan.x[{}]".format(n)
        _check_keys(entry, ("i", "k", "v"), location)
        try:
            e = instance.edge_index(int(entry["i"]), int(entry["k"]))
        except (KeyError, TypeError, ValueError) as error:
            raise InstanceFormatError(location, "no such edge") from error
        x_hat[e] = _number(entry["v"], location + ".v")

    primal = _number(doc["primal"], "plan.primal")
    dual_bound = _number(doc["dual_bound"], "plan.dual_bound")
    gap = _number(doc["gap"], "plan.gap")
    if math.isnan(gap):
        gap = relative_gap(dual_bound, primal)
    return PlanSolution(
        lam=lam,
        x_hat=x_hat,
        b_hat=b_hat,
        primal_value=primal,
        dual_bound=dual_bound,
        gap=gap,
        gap_abs=dual_bound - primal,
        spend=planned_spend(instance, x_hat, b_hat),
    )


def _check_output(path, force):
    if os.path.exists(path) and not force:
        raise FileExistsError(
            "{}: already exists, use --force to overwrite".format(path)
        )


def check_outputs(paths, force: bool = False):
    """
    Refuse the whole batch before anything is written. None entries are
    optional outputs that were not requested.

    Usage:
        io.check_outputs(("plan.json", None), force=args.force)
    """
    for path in paths:
        if path is not None:
            _check_output(path, force)


def read_json(path):
    if not os.path.isfile(path):
        raise FileNotFoundError("{}: no such file".format(path))
    with open(path, "r") as fd:
        try:
            return json.load(fd)
        except json.JSONDecodeError as error:
            raise InstanceFormatError(
                "{}:{}".format(path, error.lineno), error.msg
            ) from error


def write_json(path, doc, force: bool = False):
    _check_output(path, force)
    with open(path, "w") as fd:
        json.dump(doc, fd, indent=2, allow_nan=False)
        fd.write("\n")


def write_csv(path, header, rows, force: bool = False):
    _check_output(path, force)
    with open(path, "w", newline="") as fd:
        writer = csv.writer(fd, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                "" if isinstance(v, float) and not math.isfinite(v) else v
                for v in row
            )


def read_instance(path) -> Instance:
    """
    Usage:
        instance = io.read_instance("a.json")
    """
    return instance_from_dict(read_json(path))


def write_instance(path, instance: Instance, force: bool = False):
    write_json(path, instance_to_dict(instance), force=force)


def read_plan(path, instance: Instance) -> PlanSolution:
    return plan_from_dict(read_json(path), instance)


def write_plan(path, plan: PlanSolution, instance: Instance, force=False):
    write_json(path, plan_to_dict(plan, instance), force=force)


def sanitize(doc):
    """
    Replace non-finite floats by None, recursively, for strict JSON.
    """
    if isinstance(doc, dict):
        return {key: sanitize(value) for key, value in doc.items()}
    if isinstance(doc, (list, tuple)):
        return [sanitize(value) for value in doc]
    if isinstance(doc, float):
        return _finite_or_none(doc)
    return doc
