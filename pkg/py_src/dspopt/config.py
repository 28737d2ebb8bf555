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
from easydict import EasyDict as edict

__C = edict()
# Consumers can get config by: from dspopt.config import cfg
cfg = __C

# Phase 1: projected subgradient descent
__C.SOLVER = edict()
# The 100x100 presets need this many to get the gap under 0.2
__C.SOLVER.MAX_ITERS = 5000
# None => 1 / ||g(0)||_2
__C.SOLVER.STEP_SCALE = None
# The subgradient method is deterministic; kept for experiment manifests
__C.SOLVER.SEED = 0

# Paired simulation
__C.SIMULATION = edict()
__C.SIMULATION.RUNS = 500
__C.SIMULATION.BASE_SEED = 0
__C.SIMULATION.WORKERS = 1

# Tolerances
__C.TOL = edict()
__C.TOL.ECPI = 1e-12
__C.TOL.SUPPLY = 1e-9
__C.TOL.BUDGET = 1e-6
__C.TOL.CS = 1e-7
__C.TOL.PIVOT = 1e-9

# Synthetic generator defaults
__C.GENERATOR = edict()
__C.GENERATOR.N_IMPRESSION_TYPES = 100
__C.GENERATOR.N_CAMPAIGNS = 100
__C.GENERATOR.MARKET_SIZE = 10
__C.GENERATOR.SUPPLY = 5000.0
__C.GENERATOR.CPC = 1.0
__C.GENERATOR.BUDGET = 50.0
# "constant" or "quality_scaled"
__C.GENERATOR.BUDGET_MODE = "constant"
__C.GENERATOR.SEED = 0

# Presets
__C.PRESETS = edict()

__C.PRESETS["example-a"] = edict(
    n_impression_types=100,
    n_campaigns=100,
    market_size=10,
    supply=5000.0,
    cpc=1.0,
    budget=50.0,
    budget_mode="constant",
)

__C.PRESETS["example-b"] = edict(__C.PRESETS["example-a"])
__C.PRESETS["example-b"].budget_mode = "quality_scaled"

__C.PRESETS["sweep"] = edict(__C.PRESETS["example-a"])
__C.PRESETS["sweep"].n_impression_types = 10
# m_k for every campaign, one instance per level
__C.PRESETS["sweep"].budgets = [
    5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0
]


def solver_config(config=None):
    """
    Fill a solver config with defaults.

    Usage:
        config = solver_config({"max_iters": 200})
        config.max_iters, config.step_scale, config.seed
    """
    config = edict(dict(config or {}))
    defaults = {
        "max_iters": __C.SOLVER.MAX_ITERS,
        "step_scale": __C.SOLVER.STEP_SCALE,
        "seed": __C.SOLVER.SEED,
    }
    for key, value in defaults.items():
        if key not in config:
            config[key] = value
    return config
