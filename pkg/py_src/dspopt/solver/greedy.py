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
import numpy as np

from ..model.instance import Instance


def segment_argmax(instance: Instance, scores: np.ndarray) -> np.ndarray:
    """
    For every impression type i, the edge of K_i with the largest score.
    Ties go to the lowest campaign index.

    @param scores: Dim(|E|) in edge order, -inf marks an excluded edge

    @return Dim(|I|) edge indices, -1 where K_i is empty or all excluded
    """
    scores = np.asarray(scores, dtype=np.float64)
    best = np.full(instance.n_types, -1, dtype=np.int64)
    ptr = instance.ptr_i
    counts = np.diff(ptr)
    nonempty = np.flatnonzero(counts > 0)
    if nonempty.size == 0:
        return best

    # edges of K_i are contiguous in order_i, ascending k
    sorted_scores = scores[instance.order_i[ptr[0] : ptr[-1]]]
    starts = ptr[nonempty] - ptr[0]
    segment_max = np.maximum.reduceat(sorted_scores, starts)
    segment = np.repeat(np.arange(nonempty.size), counts[nonempty])
    hits = np.flatnonzero(sorted_scores == segment_max[segment])
    first_segment, first = np.unique(segment[hits], return_index=True)
    winner = instance.order_i[ptr[0] + hits[first]]

    keep = np.isfinite(segment_max[first_segment])
    best[nonempty[first_segment[keep]]] = winner[keep]
    return best


def greedy_allocate(instance: Instance, scores: np.ndarray) -> np.ndarray:
    """
    Optimal x of max sum(scores * x) over the supply polytope:
    x[k*(i)] = 1(scores[k*(i)] > 0) for the argmax k*(i) of every K_i.

    @param scores: Dim(|E|) in edge order

    @return Dim(|E|) 0/1 allocation

    Usage:
        x = greedy_allocate(instance, oracle_output.edge_scores)
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != (instance.n_edges,):
        raise ValueError("greedy_allocate: one score per edge is required")
    x = np.zeros(instance.n_edges)
    best = segment_argmax(instance, scores)
    best = best[best >= 0]
    best = best[scores[best] > 0]
    x[best] = 1.0
    return x
