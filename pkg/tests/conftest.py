"""Shared fixtures: the twelve-cell model grid and a seeded spec sampler."""

import numpy as np
import pytest

from tempodisc import ModelSpec, TimePerception, subjective_time

# One representative per grid cell: value deformation (exponential,
# hyperbolic, generic q) crossed with time perception (objective,
# logarithmic, power-law, unified). Parameters are kept in ranges where
# every cell stays evaluable on t in [0, 100].
PERCEPTIONS = {
    "none": None,
    "log": TimePerception(s=0.0, a=1.0, b=0.1),
    "power": TimePerception.stevens(c=1.0, b=0.1, s=0.6),
    "unified": TimePerception(s=0.6, a=1.0, b=0.1),
}
Q_VALUES = {"exp": 0.0, "hyp": 1.0, "qdef": 0.35}


def grid_cells(v0=100.0, k=0.08):
    cells = {}
    for qname, q in Q_VALUES.items():
        for tname, tp in PERCEPTIONS.items():
            cells[f"{qname}-{tname}"] = ModelSpec(v0=v0, k=k, q=q, time=tp)
    return cells


@pytest.fixture(scope="session")
def cells():
    return grid_cells()


def random_spec(rng: np.random.Generator) -> ModelSpec:
    """Draw a spec from any cell, constrained to stay finite on [0, 100].

    Negative q needs q*k*tau(100) > -1; sampling q >= 0 in three of four
    draws and shrinking k for the negative branch keeps every draw inside
    the evaluable region without biasing the positive-q cells.
    """
    v0 = rng.uniform(1.0, 500.0)
    shape = rng.integers(0, 4)
    if shape == 0:
        tp = None
    elif shape == 1:
        tp = TimePerception(s=0.0, a=rng.uniform(0.5, 2.0), b=rng.uniform(0.02, 0.5))
    elif shape == 2:
        tp = TimePerception.stevens(
            c=rng.uniform(0.5, 2.0), b=rng.uniform(0.02, 0.5), s=rng.uniform(0.2, 0.9)
        )
    else:
        tp = TimePerception(
            s=rng.uniform(-0.5, 0.9),
            a=rng.uniform(0.5, 2.0),
            b=rng.uniform(0.02, 0.5),
            c=rng.uniform(0.0, 1.0),
        )
    if rng.random() < 0.75:
        q = rng.uniform(0.0, 2.0)
        k = rng.uniform(0.02, 0.5)
    else:
        q = rng.uniform(-0.4, -1e-3)
        # keep 1 + q*k*tau positive with margin on the whole window
        tau_max = 100.0 if tp is None else subjective_time(100.0, tp)
        k = min(rng.uniform(0.02, 0.2), 0.6 / (abs(q) * tau_max))
    return ModelSpec(v0=v0, k=k, q=q, time=tp)
