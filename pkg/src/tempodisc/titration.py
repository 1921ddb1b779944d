"""Adjusting-amount titration: staircase estimation of indifference points.

For each delay the immediate amount first walks down from the delayed
amount until the chooser first prefers the delayed reward, then walks up
from one step above zero until the immediate reward is first taken. Each
preference reversal halves the step and resumes from the last amount on
the preferred side, until the step reaches min_step; the endpoint of the
descending sweep (v_d, last immediate amount accepted) and of the
ascending sweep (v_s, first immediate amount accepted) average to the
indifference point. Equal values go to the immediate reward, so the
descending sweep starts from a guaranteed acceptance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergenceError
from .models import ModelSpec, value, value_curve
from .fitting import IndifferenceDataset
from .numerics import ScheduledReward


@dataclass(frozen=True)
class ChoiceAgent:
    """Simulated chooser over an immediate amount vs a scheduled reward.

    noise_beta is the slope of a logistic choice rule on the amount
    difference; 0 selects the deterministic rule (ties to the immediate).
    """

    spec: ModelSpec
    noise_beta: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.noise_beta) and self.noise_beta >= 0.0):
            raise DomainError(f"noise_beta must be >= 0, got {self.noise_beta}")
        if self.seed < 0:
            raise DomainError(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class TitrationConfig:
    delays: tuple[float, ...]
    delayed_amount: float
    start_step: float | None = None  # default: delayed_amount / 20
    min_step: float | None = None  # default: delayed_amount / 200
    max_trials: int = 10_000

    def __post_init__(self) -> None:
        if len(self.delays) == 0:
            raise DomainError("need at least one delay")
        for d in self.delays:
            if not (math.isfinite(d) and d > 0.0):
                raise DomainError(f"delays must be > 0, got {d}")
        if any(b <= a for a, b in zip(self.delays, self.delays[1:])):
            raise DomainError("delays must be strictly increasing")
        if not (math.isfinite(self.delayed_amount) and self.delayed_amount > 0.0):
            raise DomainError(
                f"delayed amount must be > 0, got {self.delayed_amount}"
            )
        if self.start_step is None:
            object.__setattr__(self, "start_step", self.delayed_amount / 20.0)
        if self.min_step is None:
            object.__setattr__(self, "min_step", self.delayed_amount / 200.0)
        if not 0.0 < self.min_step <= self.start_step:
            raise DomainError("need 0 < min_step <= start_step")
        if self.max_trials < 1:
            raise DomainError(f"max_trials must be >= 1, got {self.max_trials}")


@dataclass(frozen=True)
class TitrationTrace:
    """Full record of one delay's staircase: every (amount, chose_immediate)
    pair in presentation order, both sweep endpoints, and their mean."""

    delay: float
    choices: tuple[tuple[float, bool], ...]
    v_d: float
    v_s: float
    indifference: float


def _logistic(x: float) -> float:
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def agent_choose(
    agent: ChoiceAgent,
    immediate: float,
    delayed: ScheduledReward,
    rng: np.random.Generator | None = None,
) -> bool:
    """True when the agent takes the immediate amount.

    The delayed reward is worth amount * V(delay)/v0 subjectively. The
    deterministic agent takes the immediate amount whenever it is at
    least that; a noisy agent takes it with probability
    logistic(noise_beta * (immediate - subjective)).
    """
    subjective = (
        delayed.amount * value(agent.spec, delayed.delivery_time) / agent.spec.v0
    )
    if agent.noise_beta == 0.0:
        return immediate >= subjective
    if rng is None:
        rng = np.random.default_rng(agent.seed)
    p = _logistic(agent.noise_beta * (immediate - subjective))
    return bool(rng.random() < p)


def _descend(choose, config: TitrationConfig) -> float:
    step = config.start_step
    cap = config.delayed_amount
    amount = cap
    last_accepted = None
    while True:
        if choose(amount):
            last_accepted = amount
            if amount <= 0.0:
                return 0.0  # noise accepted a zero immediate; cannot descend
            amount = max(amount - step, 0.0)
        else:
            if step <= config.min_step * (1.0 + 1e-12):
                if last_accepted is None:  # noise rejected the opening amount
                    return min(amount + step, cap)
                return last_accepted
            step = max(0.5 * step, config.min_step)
            anchor = cap if last_accepted is None else last_accepted
            amount = max(anchor - step, 0.0)


def _ascend(choose, config: TitrationConfig) -> float:
    step = config.start_step
    cap = config.delayed_amount
    last_declined = 0.0  # a zero immediate is declined by construction
    amount = min(step, cap)
    while True:
        if choose(amount):
            if step <= config.min_step * (1.0 + 1e-12):
                return amount
            step = max(0.5 * step, config.min_step)
            amount = min(last_declined + step, cap)
        else:
            last_declined = amount
            amount = min(amount + step, cap)


def run_titration(config: TitrationConfig, agent: ChoiceAgent) -> list[TitrationTrace]:
    """Run the two-sweep staircase at every configured delay.

    Each delay gets its own random stream derived from (agent.seed, delay
    index), so traces do not depend on execution order. Raises
    NonConvergenceError when a delay spends max_trials choices without
    finishing both sweeps.
    """
    traces = []
    for index, delay in enumerate(config.delays):
        rng = np.random.default_rng([agent.seed, index])
        delayed = ScheduledReward(amount=config.delayed_amount, delivery_time=delay)
        choices: list[tuple[float, bool]] = []

        def choose(amount: float) -> bool:
            if len(choices) >= config.max_trials:
                raise NonConvergenceError(
                    f"titration at delay {delay} exhausted {config.max_trials} "
                    "trials before a preference switch"
                )
            took_immediate = agent_choose(agent, amount, delayed, rng)
            choices.append((amount, took_immediate))
            return took_immediate

        v_d = _descend(choose, config)
        v_s = _ascend(choose, config)
        traces.append(
            TitrationTrace(
                delay=float(delay),
                choices=tuple(choices),
                v_d=v_d,
                v_s=v_s,
                indifference=0.5 * (v_d + v_s),
            )
        )
    return traces


def generate_dataset(
    spec: ModelSpec,
    delays,
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> IndifferenceDataset:
    """Synthetic indifference points: V(t) plus Gaussian noise, clamped to
    (0, v0]. noise_sigma = 0 reproduces the closed form exactly."""
    if not (math.isfinite(noise_sigma) and noise_sigma >= 0.0):
        raise DomainError(f"noise_sigma must be >= 0, got {noise_sigma}")
    ts = np.asarray(delays, dtype=float)
    vals = value_curve(spec, ts)
    if noise_sigma > 0.0:
        rng = np.random.default_rng(seed)
        vals = vals + rng.normal(0.0, noise_sigma, size=ts.shape)
        vals = np.clip(vals, 1e-9 * spec.v0, spec.v0)
    return IndifferenceDataset(v0=spec.v0, delays=ts, values=vals)
