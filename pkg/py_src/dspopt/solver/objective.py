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


def _per_edge(instance, values, name):
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (instance.n_edges,):
        raise ValueError("{}: expected Dim({}) per-edge vector".format(
            name, instance.n_edges))
    return values


def profit(instance: Instance, x, b) -> float:
    """
    pi(x, b) = sum_E [r_ik - beta_i(b_ik)] s_i x_ik rho_i(b_ik)

    Expected total profit of the DSP over the horizon.
    """
    x = _per_edge(instance, x, "profit")
    b = _per_edge(instance, b, "profit")
    batch = instance.edge_landscapes
    margin = instance.ecpi * batch.win_prob(b) - batch.partial_mean(b)
    return float(np.sum(instance.edge_supply * x * margin))


def planned_spend(instance: Instance, x, b) -> np.ndarray:
    """
    @return Dim(|K|) expected spend sum_{i in I_k} r_ik s_i x_ik rho_i(b_ik)
    """
    x = _per_edge(instance, x, "planned_spend")
    b = _per_edge(instance, b, "planned_spend")
    edge_spend = (
        instance.ecpi * instance.edge_supply * x
        * instance.edge_landscapes.win_prob(b)
    )
    return np.bincount(
        instance.edge_k, weights=edge_spend, minlength=instance.n_campaigns
    )


def lagrangian(instance: Instance, x, b, lam) -> float:
    """
    L(x, b, lambda) = pi(x, b) + sum_k lambda_k [m_k - spend_k(x, b)]
    """
    lam = np.asarray(lam, dtype=np.float64)
    slack = instance.budget - planned_spend(instance, x, b)
    return profit(instance, x, b) + float(np.dot(lam, slack))
