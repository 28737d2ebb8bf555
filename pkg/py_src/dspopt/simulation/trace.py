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
from collections import namedtuple

import numpy as np

from ..model.instance import Instance

Arrival = namedtuple(
    "Arrival", ["impression_type", "max_bid", "click_uniform", "select_uniform"]
)


class ArrivalTrace:
    """
    One realization of the arrival, auction and click randomness.

    Both policies of a paired run consume the same trace: the type sequence,
    the realized highest competing bid of every auction and one click uniform
    per arrival. select_uniforms drive the Lagrangian policy's campaign draw.

    Usage:
        trace = generate_trace(instance, seed=3)
        len(trace)
        for arrival in trace:
            arrival.impression_type, arrival.max_bid
    """

    def __init__(
        self,
        types: np.ndarray,
        max_bids: np.ndarray,
        click_uniforms: np.ndarray,
        select_uniforms: np.ndarray,
        seed=None,
    ):
        self.types = np.asarray(types, dtype=np.int64)
        self.max_bids = np.asarray(max_bids, dtype=np.float64)
        self.click_uniforms = np.asarray(click_uniforms, dtype=np.float64)
        self.select_uniforms = np.asarray(select_uniforms, dtype=np.float64)
        self.seed = seed
        size = self.types.size
        if not (
            self.max_bids.size == size
            and self.click_uniforms.size == size
            and self.select_uniforms.size == size
        ):
            raise ValueError("ArrivalTrace: per-arrival arrays differ in length")
        self.count = 0

    def type_counts(self, n_types: int) -> np.ndarray:
        return np.bincount(self.types, minlength=n_types)

    def __iter__(self):
        self.count = 0
        return self

    def __next__(self):
        if self.count == len(self):
            raise StopIteration
        n = self.count
        self.count += 1
        return Arrival(
            int(self.types[n]),
            float(self.max_bids[n]),
            float(self.click_uniforms[n]),
            float(self.select_uniforms[n]),
        )

    def __len__(self):
        return int(self.types.size)


def generate_trace(instance: Instance, seed) -> ArrivalTrace:
    """
    N ~ Poisson(sum_i s_i) arrivals, each of type i with probability
    s_i / sum_j s_j, which splits into independent Poisson(s_i) counts.

    Draw order from default_rng(seed): N, types, competing bids by ascending
    type, click uniforms, selection uniforms.
    """
    rng = np.random.default_rng(seed)
    total = float(np.sum(instance.supply))
    if not total > 0:
        empty = np.zeros(0)
        return ArrivalTrace(empty.astype(np.int64), empty, empty, empty, seed)

    n = int(rng.poisson(total))
    types = rng.choice(instance.n_types, size=n, p=instance.supply / total)

    max_bids = np.zeros(n)
    order = np.argsort(types, kind="stable")
    bounds = np.searchsorted(types[order], np.arange(instance.n_types + 1))
    for i in range(instance.n_types):
        index = order[bounds[i] : bounds[i + 1]]
        if index.size:
            max_bids[index] = instance.landscape_of(i).sample(
                rng, size=index.size
            )

    click_uniforms = rng.random(n)
    select_uniforms = rng.random(n)
    return ArrivalTrace(types, max_bids, click_uniforms, select_uniforms, seed)
