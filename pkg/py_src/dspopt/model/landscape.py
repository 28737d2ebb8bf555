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
from scipy import stats

BINOMIAL_MAX_UNIFORM = "binomial_max_uniform"
EMPIRICAL = "empirical"


def _as_bid(b, name):
    bid = np.asarray(b, dtype=np.float64)
    if np.any(np.isnan(bid)) or np.any(bid < 0):
        raise ValueError("{}: bid price must be nonnegative".format(name))
    return bid


def _scalar_or_array(value, like):
    if np.ndim(like) == 0:
        return float(value)
    return value


class Landscape:
    """
    Distribution of the highest competing bid B^max of one impression type.

    rho(b)  = P(B^max <= b)              -> win_prob
    P(b)    = E[B^max * 1(B^max <= b)]   -> partial_mean
    beta(b) = E[B^max | B^max <= b]      -> truncated_mean

    Ties are won by the DSP, so win_prob includes B^max == b.
    """

    kind = None

    def __init__(self, landscape_id=None):
        self.id = landscape_id

    def win_prob(self, b):
        raise NotImplementedError

    def partial_mean(self, b):
        raise NotImplementedError

    def sample(self, rng, size=None):
        raise NotImplementedError

    def params(self):
        raise NotImplementedError

    def truncated_mean(self, b):
        """
        @param b: bid price(s) >= 0

        @return E[B^max | B^max <= b], 0 where win_prob(b) == 0
        """
        bid = _as_bid(b, self.__class__.__name__)
        rho = np.asarray(self.win_prob(bid), dtype=np.float64)
        partial = np.asarray(self.partial_mean(bid), dtype=np.float64)
        mean = np.divide(
            partial, rho, out=np.zeros_like(rho), where=rho > 0
        )
        return _scalar_or_array(mean, bid)

    def expected_win_utility(self, b, v):
        """
        Expected second-price utility of bidding b with valuation v.

        @return [v - truncated_mean(b)] * win_prob(b)
        """
        bid = _as_bid(b, self.__class__.__name__)
        utility = np.asarray(v, dtype=np.float64) * self.win_prob(
            bid
        ) - self.partial_mean(bid)
        return _scalar_or_array(utility, bid)

    def to_record(self):
        return {"id": self.id, "kind": self.kind, "params": self.params()}

    def __repr__(self):
        return "{}(id={!r}, {})".format(
            self.__class__.__name__, self.id, self.params()
        )


class BinomialMaxUniformLandscape(Landscape):
    """
    B^max = max of Bin(M, Q) independent U[0, 1] bids, 0 if nobody shows up.

    win_prob(b)     = (1 - Q + Q * min(b, 1))^M
    partial_mean(b) = sum_n C(M, n) Q^n (1 - Q)^(M - n) n u^(n + 1) / (n + 1),
                      u = min(b, 1)
    """

    kind = BINOMIAL_MAX_UNIFORM

    def __init__(self, market_size: int, quality: float, landscape_id=None):
        super(BinomialMaxUniformLandscape, self).__init__(landscape_id)
        if int(market_size) != market_size or market_size < 1:
            raise ValueError(
                "BinomialMaxUniformLandscape: M must be a positive integer"
            )
        if not 0.0 <= quality <= 1.0:
            raise ValueError("BinomialMaxUniformLandscape: Q must be in [0, 1]")
        self.market_size = int(market_size)
        self.quality = float(quality)
        # P(n competing bidders), n = 0..M; logpmf stays finite for tiny Q
        self.pmf = np.exp(
            stats.binom.logpmf(
                np.arange(self.market_size + 1), self.market_size, self.quality
            )
        )

    def win_prob(self, b):
        bid = _as_bid(b, "BinomialMaxUniformLandscape")
        u = np.minimum(bid, 1.0)
        rho = (1.0 - self.quality + self.quality * u) ** self.market_size
        return _scalar_or_array(rho, bid)

    def partial_mean(self, b):
        bid = _as_bid(b, "BinomialMaxUniformLandscape")
        u = np.minimum(bid, 1.0)
        n = np.arange(1, self.market_size + 1)
        weight = self.pmf[1:] * n / (n + 1.0)
        partial = np.sum(weight * u[..., np.newaxis] ** (n + 1), axis=-1)
        return _scalar_or_array(partial, bid)

    def sample(self, rng, size=None):
        """
        Max of n uniforms has CDF t^n, so it is drawn as V^(1/n).

        Usage:
            rng = np.random.default_rng(7)
            landscape.sample(rng)            # float
            landscape.sample(rng, 1000)      # Dim(1000)
        """
        n = rng.binomial(self.market_size, self.quality, size=size)
        v = rng.random(size=size)
        bids = np.where(n > 0, v ** (1.0 / np.maximum(n, 1)), 0.0)
        if size is None:
            return float(bids)
        return bids

    def params(self):
        return {"M": self.market_size, "Q": self.quality}


class EmpiricalLandscape(Landscape):
    """
    Piecewise-constant CDF of an observed list of competing max bids.
    """

    kind = EMPIRICAL

    def __init__(self, samples, landscape_id=None):
        super(EmpiricalLandscape, self).__init__(landscape_id)
        samples = np.sort(np.asarray(samples, dtype=np.float64))
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("EmpiricalLandscape: samples must be a nonempty list")
        if np.any(np.isnan(samples)) or samples[0] < 0:
            raise ValueError("EmpiricalLandscape: samples must be nonnegative")
        self.samples = samples
        self._prefix = np.concatenate([[0.0], np.cumsum(samples)])

    def _count(self, bid):
        return np.searchsorted(self.samples, bid, side="right")

    def win_prob(self, b):
        bid = _as_bid(b, "EmpiricalLandscape")
        rho = self._count(bid) / self.samples.size
        return _scalar_or_array(rho, bid)

    def partial_mean(self, b):
        bid = _as_bid(b, "EmpiricalLandscape")
        partial = self._prefix[self._count(bid)] / self.samples.size
        return _scalar_or_array(partial, bid)

    def sample(self, rng, size=None):
        draws = rng.choice(self.samples, size=size)
        if size is None:
            return float(draws)
        return draws

    def params(self):
        return {"samples": self.samples.tolist()}


def from_record(record: dict) -> Landscape:
    """
    @param record: {"id": ..., "kind": ..., "params": {...}}
    """
    kind = record.get("kind")
    params = record.get("params", {})
    if kind == BINOMIAL_MAX_UNIFORM:
        unknown = set(params) - {"M", "Q"}
        if unknown:
            raise KeyError("unknown params {}".format(sorted(unknown)))
        return BinomialMaxUniformLandscape(
            params["M"], params["Q"], landscape_id=record.get("id")
        )
    if kind == EMPIRICAL:
        unknown = set(params) - {"samples"}
        if unknown:
            raise KeyError("unknown params {}".format(sorted(unknown)))
        return EmpiricalLandscape(params["samples"], landscape_id=record.get("id"))
    raise ValueError("Landscape: {!r} is not a valid kind".format(kind))


class LandscapeBatch:
    """
    Evaluates one bid per element, element e using landscapes[e].

    Binomial landscapes are evaluated together through one probability-mass
    matrix; other kinds fall back to one vectorized call per landscape.

    Usage:
        batch = LandscapeBatch([instance.landscape_of(i) for i in edge_i])
        rho = batch.win_prob(bids)
        partial = batch.partial_mean(bids)
    """

    def __init__(self, landscapes):
        self.size = len(landscapes)
        unique = {}
        element_unique = np.empty(self.size, dtype=np.int64)
        for e, landscape in enumerate(landscapes):
            element_unique[e] = unique.setdefault(id(landscape), len(unique))
        by_position = [None] * len(unique)
        for landscape in landscapes:
            by_position[unique[id(landscape)]] = landscape

        binomial = np.array(
            [isinstance(l, BinomialMaxUniformLandscape) for l in by_position],
            dtype=bool,
        )
        is_binomial = binomial[element_unique] if self.size else np.zeros(0, bool)
        self._binomial_index = np.flatnonzero(is_binomial)

        if self._binomial_index.size:
            max_m = max(
                l.market_size for l, is_b in zip(by_position, binomial) if is_b
            )
            pmf = np.zeros((len(by_position), max_m + 1))
            market = np.ones(len(by_position))
            quality = np.zeros(len(by_position))
            for u, landscape in enumerate(by_position):
                if binomial[u]:
                    pmf[u, : landscape.market_size + 1] = landscape.pmf
                    market[u] = landscape.market_size
                    quality[u] = landscape.quality
            rows = element_unique[self._binomial_index]
            n = np.arange(1, max_m + 1)
            self._power = n + 1
            self._weight = pmf[rows, 1:] * n / (n + 1.0)
            self._market = market[rows]
            self._quality = quality[rows]

        self._others = []
        for u, landscape in enumerate(by_position):
            if not binomial[u]:
                self._others.append(
                    (landscape, np.flatnonzero(element_unique == u))
                )

    def win_prob(self, b):
        bid = _as_bid(b, "LandscapeBatch")
        rho = np.empty(self.size)
        if self._binomial_index.size:
            u = np.minimum(bid[self._binomial_index], 1.0)
            rho[self._binomial_index] = (
                1.0 - self._quality + self._quality * u
            ) ** self._market
        for landscape, index in self._others:
            rho[index] = landscape.win_prob(bid[index])
        return rho

    def partial_mean(self, b):
        bid = _as_bid(b, "LandscapeBatch")
        partial = np.empty(self.size)
        if self._binomial_index.size:
            u = np.minimum(bid[self._binomial_index], 1.0)
            partial[self._binomial_index] = np.sum(
                self._weight * u[:, np.newaxis] ** self._power, axis=1
            )
        for landscape, index in self._others:
            partial[index] = landscape.partial_mean(bid[index])
        return partial
