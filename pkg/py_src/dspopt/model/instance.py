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
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import cfg
from .landscape import Landscape, LandscapeBatch


@dataclass(frozen=True)
class ImpressionTypeSpec:
    id: str
    supply: float
    landscape_ref: str


@dataclass(frozen=True)
class CampaignSpec:
    id: str
    budget: float
    cpc: float
    # impression type indices, I_k
    targets: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Edge:
    i: int
    k: int
    ctr: float
    # r_ik; derived from q_k * ctr when None
    ecpi: Optional[float] = None


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self):
        return len(self.violations) == 0

    def __bool__(self):
        return self.ok

    def __str__(self):
        lines = ["pass" if self.ok else "FAIL"]
        lines += ["violation: " + v for v in self.violations]
        lines += ["warning: " + w for w in self.warnings]
        return "\n".join(lines)


def _segment_view(keys: np.ndarray, minor: np.ndarray, size: int):
    """
    @return (order, ptr): edges sorted by (keys, minor), and offsets so that
        order[ptr[j]:ptr[j + 1]] are the edges with keys == j
    """
    order = np.lexsort((minor, keys))
    ptr = np.searchsorted(keys[order], np.arange(size + 1), side="left")
    return order, ptr


def _readonly(array):
    array.setflags(write=False)
    return array


class Instance:
    """
    Planning problem: impression types I, campaigns K and the targeting graph
    E between them. Immutable after construction.

    Indices are dense and 0-based. Edges keep the order they were given in
    (the "edge order" used by every per-edge vector) and two views:
        by_i: order_i[ptr_i[i]:ptr_i[i + 1]] -> edges of K_i, by campaign
        by_k: order_k[ptr_k[k]:ptr_k[k + 1]] -> edges of I_k, by type

    Usage:
        instance = Instance(types, campaigns, edges, landscapes)
        instance.ecpi            # r_ik in edge order
        instance.campaigns_of(3) # K_3
    """

    def __init__(
        self,
        impression_types: Sequence[ImpressionTypeSpec],
        campaigns: Sequence[CampaignSpec],
        edges: Sequence[Edge],
        landscapes: Sequence[Landscape],
    ):
        self.impression_types = tuple(impression_types)
        self.campaigns = tuple(campaigns)
        self.edges = tuple(edges)
        self.landscapes = tuple(landscapes)

        n_types = len(self.impression_types)
        n_campaigns = len(self.campaigns)

        self.supply = _readonly(
            np.array([t.supply for t in self.impression_types], dtype=np.float64)
        )
        self.budget = _readonly(
            np.array([c.budget for c in self.campaigns], dtype=np.float64)
        )
        self.cpc = _readonly(
            np.array([c.cpc for c in self.campaigns], dtype=np.float64)
        )
        self.edge_i = _readonly(
            np.array([e.i for e in self.edges], dtype=np.int64)
        )
        self.edge_k = _readonly(
            np.array([e.k for e in self.edges], dtype=np.int64)
        )
        self.ctr = _readonly(
            np.array([e.ctr for e in self.edges], dtype=np.float64)
        )

        valid_k = (self.edge_k >= 0) & (self.edge_k < n_campaigns)
        derived = np.full(len(self.edges), np.nan)
        derived[valid_k] = self.cpc[self.edge_k[valid_k]] * self.ctr[valid_k]
        self.ecpi = _readonly(
            np.array(
                [
                    derived[n] if e.ecpi is None else e.ecpi
                    for n, e in enumerate(self.edges)
                ],
                dtype=np.float64,
            )
        )

        landscape_ids = {}
        for n, landscape in enumerate(self.landscapes):
            landscape_ids.setdefault(landscape.id, n)
        self._landscape_ids = landscape_ids
        self.type_landscape = _readonly(
            np.array(
                [
                    landscape_ids.get(t.landscape_ref, -1)
                    for t in self.impression_types
                ],
                dtype=np.int64,
            )
        )

        order_i, ptr_i = _segment_view(self.edge_i, self.edge_k, n_types)
        order_k, ptr_k = _segment_view(self.edge_k, self.edge_i, n_campaigns)
        self.order_i, self.ptr_i = _readonly(order_i), _readonly(ptr_i)
        self.order_k, self.ptr_k = _readonly(order_k), _readonly(ptr_k)

        self._edge_lookup = None
        self._edge_landscapes = None

    @property
    def n_types(self):
        return len(self.impression_types)

    @property
    def n_campaigns(self):
        return len(self.campaigns)

    @property
    def n_edges(self):
        return len(self.edges)

    def edges_of_type(self, i: int) -> np.ndarray:
        """
        @return edge indices of K_i, ascending campaign index
        """
        return self.order_i[self.ptr_i[i] : self.ptr_i[i + 1]]

    def edges_of_campaign(self, k: int) -> np.ndarray:
        """
        @return edge indices of I_k, ascending type index
        """
        return self.order_k[self.ptr_k[k] : self.ptr_k[k + 1]]

    def campaigns_of(self, i: int) -> np.ndarray:
        return self.edge_k[self.edges_of_type(i)]

    def types_of(self, k: int) -> np.ndarray:
        return self.edge_i[self.edges_of_campaign(k)]

    def landscape_of(self, i: int) -> Landscape:
        index = self.type_landscape[i]
        if index < 0:
            raise KeyError(
                "Instance: landscape {!r} of impression type {} does not "
                "exist".format(self.impression_types[i].landscape_ref, i)
            )
        return self.landscapes[index]

    def edge_index(self, i: int, k: int) -> int:
        """
        @return position of edge (i, k) in edge order

        Usage:
            e = instance.edge_index(0, 2)
        """
        if self._edge_lookup is None:
            self._edge_lookup = {
                (e.i, e.k): n for n, e in enumerate(self.edges)
            }
        try:
            return self._edge_lookup[(i, k)]
        except KeyError:
            raise KeyError("Instance: ({}, {}) is not an edge".format(i, k))

    @property
    def edge_supply(self) -> np.ndarray:
        """
        s_i per edge
        """
        return self.supply[self.edge_i]

    @property
    def edge_landscapes(self) -> LandscapeBatch:
        """
        rho_i and partial means evaluated per edge in one pass
        """
        if self._edge_landscapes is None:
            self._edge_landscapes = LandscapeBatch(
                [self.landscape_of(i) for i in self.edge_i]
            )
        return self._edge_landscapes

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_edge_lookup"] = None
        state["_edge_landscapes"] = None
        return state

    def __setstate__(self, state):
        for name, value in state.items():
            if isinstance(value, np.ndarray):
                value.setflags(write=False)
        self.__dict__.update(state)

    def __repr__(self):
        return "Instance(|I|={}, |K|={}, |E|={})".format(
            self.n_types, self.n_campaigns, self.n_edges
        )


def validate(instance: Instance) -> ValidationReport:
    """
    Violations are returned, never raised.

    Usage:
        report = validate(instance)
        if not report.ok:
            print(report)
    """
    report = ValidationReport()
    violation = report.violations.append
    n_types, n_campaigns = instance.n_types, instance.n_campaigns

    seen = set()
    for landscape in instance.landscapes:
        if landscape.id in seen:
            violation("landscape {!r}: duplicate id".format(landscape.id))
        seen.add(landscape.id)

    seen = set()
    for i, spec in enumerate(instance.impression_types):
        if spec.id in seen:
            violation("impression type {}: duplicate id {!r}".format(i, spec.id))
        seen.add(spec.id)
        if not spec.supply >= 0:
            violation("impression type {}: negative supply".format(i))
        if instance.type_landscape[i] < 0:
            violation(
                "impression type {}: dangling landscape {!r}".format(
                    i, spec.landscape_ref
                )
            )

    seen = set()
    targets = set()
    for k, spec in enumerate(instance.campaigns):
        if spec.id in seen:
            violation("campaign {}: duplicate id {!r}".format(k, spec.id))
        seen.add(spec.id)
        if not spec.budget >= 0:
            violation("campaign {}: negative budget".format(k))
        if not spec.cpc > 0:
            violation("campaign {}: cpc price must be positive".format(k))
        if len(spec.targets) == 0:
            report.warnings.append("campaign {}: empty target set".format(k))
        if len(set(spec.targets)) != len(spec.targets):
            violation("campaign {}: duplicate target".format(k))
        for i in spec.targets:
            if not 0 <= i < n_types:
                violation("campaign {}: dangling index {}".format(k, i))
            targets.add((i, k))

    seen = set()
    tol = cfg.TOL.ECPI
    for n, edge in enumerate(instance.edges):
        pair = (edge.i, edge.k)
        if not (0 <= edge.i < n_types and 0 <= edge.k < n_campaigns):
            violation("edge {}: dangling index {}".format(n, pair))
            continue
        if pair in seen:
            violation("edge {}: duplicate edge {}".format(n, pair))
        seen.add(pair)
        if pair not in targets:
            violation("edge {}: edge not in target set {}".format(n, pair))
        if not 0.0 <= edge.ctr <= 1.0:
            violation("edge {}: ctr outside [0, 1]".format(n))
        r = instance.ecpi[n]
        expected = instance.cpc[edge.k] * edge.ctr
        if not abs(r - expected) <= tol:
            violation(
                "edge {}: r_ik != q_k * ctr ({!r} vs {!r})".format(n, r, expected)
            )

    for pair in sorted(targets - seen):
        violation("target {}: missing edge".format(pair))

    return report


def edge_count(instance: Instance) -> int:
    """
    @return |E| = sum_k |I_k|
    """
    return instance.n_edges
