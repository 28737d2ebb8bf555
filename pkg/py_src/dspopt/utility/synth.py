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
from dataclasses import asdict, dataclass
import logging

import numpy as np

from ..config import cfg
from ..model.instance import CampaignSpec, Edge, ImpressionTypeSpec, Instance
from ..model.landscape import BinomialMaxUniformLandscape

logger = logging.getLogger(__name__)

CONSTANT = "constant"
QUALITY_SCALED = "quality_scaled"

QualityDraws = namedtuple("QualityDraws", ["types", "campaigns", "edges"])


@dataclass(frozen=True)
class GeneratorConfig:
    n_impression_types: int = cfg.GENERATOR.N_IMPRESSION_TYPES
    n_campaigns: int = cfg.GENERATOR.N_CAMPAIGNS
    market_size: int = cfg.GENERATOR.MARKET_SIZE
    supply: float = cfg.GENERATOR.SUPPLY
    cpc: float = cfg.GENERATOR.CPC
    # c in m_k = c or m_k = c * Q_k
    budget: float = cfg.GENERATOR.BUDGET
    budget_mode: str = cfg.GENERATOR.BUDGET_MODE
    seed: int = cfg.GENERATOR.SEED

    def __post_init__(self):
        for name in ("n_impression_types", "n_campaigns", "market_size"):
            if int(getattr(self, name)) < 1:
                raise ValueError("GeneratorConfig: {} should be >= 1".format(name))
        for name in ("supply", "cpc", "budget"):
            if not getattr(self, name) > 0:
                raise ValueError("GeneratorConfig: {} should be > 0".format(name))
        if self.budget_mode not in (CONSTANT, QUALITY_SCALED):
            raise ValueError(
                "GeneratorConfig: {!r} is not a valid budget mode".format(
                    self.budget_mode
                )
            )

    @classmethod
    def from_preset(cls, name: str, seed: int = 0, **overrides):
        """
        Usage:
            config = GeneratorConfig.from_preset("example-b", seed=7)
        """
        if name not in cfg.PRESETS:
            raise ValueError(
                "GeneratorConfig: unknown preset {!r}, expected one of {}".format(
                    name, sorted(cfg.PRESETS)
                )
            )
        fields = {
            key: value
            for key, value in cfg.PRESETS[name].items()
            if key in cls.__dataclass_fields__
        }
        fields.update(overrides)
        fields["seed"] = seed
        return cls(**fields)

    def to_dict(self):
        return asdict(self)


def draw_quality(config: GeneratorConfig) -> QualityDraws:
    """
    Streams are split from the seed in a fixed order:
        0: campaign quality Q_k ~ U[0, 1]
        1: impression type quality Q_i ~ U[0, 1]
        2: edge coins, (i, k) in E iff coin_ik < Q_i

    @return QualityDraws(types=Dim(|I|), campaigns=Dim(|K|),
        edges=Dim(|I|, |K|) bool)
    """
    campaign_stream, type_stream, edge_stream = [
        np.random.default_rng(child)
        for child in np.random.SeedSequence(config.seed).spawn(3)
    ]
    q_campaigns = campaign_stream.random(config.n_campaigns)
    q_types = type_stream.random(config.n_impression_types)
    coins = edge_stream.random((config.n_impression_types, config.n_campaigns))
    return QualityDraws(
        types=q_types, campaigns=q_campaigns, edges=coins < q_types[:, None]
    )


def campaign_budgets(config: GeneratorConfig, q_campaigns) -> np.ndarray:
    if config.budget_mode == QUALITY_SCALED:
        return config.budget * np.asarray(q_campaigns, dtype=np.float64)
    return np.full(len(q_campaigns), float(config.budget))


def build_instance(config: GeneratorConfig, draws: QualityDraws) -> Instance:
    """
    ctr theta_ik = Q_i * Q_k and one BinomialMaxUniformLandscape(M, Q_i) per
    impression type. Campaigns without any sampled edge keep an empty
    target set.
    """
    n_types, n_campaigns = draws.edges.shape
    landscapes = [
        BinomialMaxUniformLandscape(
            config.market_size, float(q), landscape_id="L{}".format(i)
        )
        for i, q in enumerate(draws.types)
    ]
    impression_types = [
        ImpressionTypeSpec(
            id="i{}".format(i),
            supply=float(config.supply),
            landscape_ref="L{}".format(i),
        )
        for i in range(n_types)
    ]

    edge_i, edge_k = np.nonzero(draws.edges)
    budgets = campaign_budgets(config, draws.campaigns)
    campaigns = [
        CampaignSpec(
            id="k{}".format(k),
            budget=float(budgets[k]),
            cpc=float(config.cpc),
            targets=tuple(int(i) for i in np.flatnonzero(draws.edges[:, k])),
        )
        for k in range(n_campaigns)
    ]
    edges = [
        Edge(i=int(i), k=int(k), ctr=float(draws.types[i] * draws.campaigns[k]))
        for i, k in zip(edge_i, edge_k)
    ]

    empty = [c.id for c in campaigns if not c.targets]
    if empty:
        logger.info("generate: %d campaigns without targets", len(empty))
    return Instance(impression_types, campaigns, edges, landscapes)


def generate(config: GeneratorConfig) -> Instance:
    """
    Usage:
        instance = generate(GeneratorConfig.from_preset("example-a", seed=7))
    """
    return build_instance(config, draw_quality(config))


def generate_sweep(config: GeneratorConfig, budgets=None):
    """
    Instances that share one set of quality draws and differ only in budget
    (constant budget mode).

    @return list of (budget, Instance)
    """
    if budgets is None:
        budgets = cfg.PRESETS["sweep"].budgets
    draws = draw_quality(config)
    sweep = []
    for budget in budgets:
        level = GeneratorConfig(
            **dict(config.to_dict(), budget=float(budget), budget_mode=CONSTANT)
        )
        sweep.append((float(budget), build_instance(level, draws)))
    return sweep


def quality_record(config: GeneratorConfig, draws: QualityDraws) -> dict:
    """
    @return sidecar document {"seed", "quality_types", "quality_campaigns"}
    """
    return {
        "seed": int(config.seed),
        "quality_types": [float(q) for q in draws.types],
        "quality_campaigns": [float(q) for q in draws.campaigns],
    }
