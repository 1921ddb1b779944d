"""Discount-model grid: value, rate, and inconsistency closed forms.

A model couples a value-side deformation q (0 = exponential, 1 =
hyperbolic, anything else q-deformed) with an optional subjective-time
law. Every combination evaluates through one master path:

    V(t)  = v0 / q_exp(k * tau(t), q)
    I(t)  = -d ln V / dt = k * tau'(t) / (1 + q * k * tau(t))
    dI/dt = q * H(I) + (1 - s) * F(I, t)

with tau(t) = t when no time perception is attached (then the F term
drops), H(I) = -I**2 and F(I, t) = -b*I/(1 + b*t). The additive split of
dI/dt into a value-deformation part q*H and a time-perception part
(1-s)*F is what decompose_inconsistency reports, and it is the same
split the ODE reconstruction integrates.

Dedicated closed forms for the historical special cases (hyperbolic,
power/log perception with exponential discounting, and so on) are kept
out of this module on purpose; the test suite carries them as
independent oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from .deformed import TimePerception, q_exp, q_log
from .errors import (
    DivergenceError,
    DomainError,
    FormatError,
    UnsupportedModelError,
)

_SPEC_BASE_KEYS = ("v0", "k", "q")
_SPEC_TIME_KEYS = ("s", "a", "b", "c")


@dataclass(frozen=True)
class ModelSpec:
    """One cell of the model grid.

    v0 is the objective reward value, k the impulsivity scale per unit of
    subjective time, q the value-side deformation, and time the optional
    subjective-time law (None means objective time).
    """

    v0: float
    k: float
    q: float
    time: TimePerception | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.v0) and self.v0 > 0.0):
            raise DomainError(f"reward value v0 must be > 0, got {self.v0}")
        if not (math.isfinite(self.k) and self.k > 0.0):
            raise DomainError(f"impulsivity k must be > 0, got {self.k}")
        if not math.isfinite(self.q):
            raise DomainError(f"deformation q must be finite, got {self.q}")

    def to_dict(self) -> dict[str, float]:
        """Plain-JSON form: v0/k/q, plus s/a/b/c when time perception is set."""
        out = {"v0": self.v0, "k": self.k, "q": self.q}
        if self.time is not None:
            out.update(s=self.time.s, a=self.time.a, b=self.time.b, c=self.time.c)
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "ModelSpec":
        """Parse the JSON form; field names are exact, s/a/b/c all-or-none."""
        if not isinstance(data, Mapping):
            raise FormatError("model spec must be a JSON object")
        keys = set(data)
        missing = [k for k in _SPEC_BASE_KEYS if k not in keys]
        if missing:
            raise FormatError(f"model spec is missing fields: {', '.join(missing)}")
        unknown = keys.difference(_SPEC_BASE_KEYS, _SPEC_TIME_KEYS)
        if unknown:
            raise FormatError(f"model spec has unknown fields: {', '.join(sorted(unknown))}")
        time_keys = keys.intersection(_SPEC_TIME_KEYS)
        if time_keys and len(time_keys) != len(_SPEC_TIME_KEYS):
            raise FormatError("time-perception fields s, a, b, c must be given together")
        vals = {}
        for name in keys:
            v = data[name]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise FormatError(f"model spec field {name!r} must be a number")
            vals[name] = float(v)
        try:
            time = (
                TimePerception(s=vals["s"], a=vals["a"], b=vals["b"], c=vals["c"])
                if time_keys
                else None
            )
            return cls(v0=vals["v0"], k=vals["k"], q=vals["q"], time=time)
        except DomainError as exc:
            raise FormatError(f"invalid model spec: {exc}") from exc


class ImpulsivityRegime(Enum):
    DECREASING = "decreasing"
    CONSISTENT = "consistent"
    INCREASING = "increasing"


@dataclass(frozen=True)
class DecompositionReport:
    """Additive split of the inconsistency degree at one time point.

    total = value_term + time_term by construction, with
    value_term = q*H(I) and time_term = (1-s)*F(I); rate is I(t).
    """

    total: float
    value_term: float
    time_term: float
    rate: float


def _tau(spec: ModelSpec, t: float) -> float:
    if spec.time is None:
        return t
    tp = spec.time
    arg = 1.0 + tp.b * t
    if not arg > 0.0:
        raise DomainError(f"subjective time undefined at t={t} (1 + b*t <= 0)")
    return tp.a * q_log(arg, tp.s) + tp.c


def _tau_prime(spec: ModelSpec, t: float) -> float:
    if spec.time is None:
        return 1.0
    tp = spec.time
    arg = 1.0 + tp.b * t
    if not arg > 0.0:
        raise DomainError(f"subjective time undefined at t={t} (1 + b*t <= 0)")
    return tp.a * tp.b * arg ** (tp.s - 1.0)


def _deformed_argument(spec: ModelSpec, t: float) -> tuple[float, float]:
    """Return (u, 1 + q*u) for u = k*tau(t), failing where the curve collapses."""
    u = spec.k * _tau(spec, t)
    shifted = 1.0 + spec.q * u
    if not shifted > 0.0:
        raise DivergenceError(
            f"discount curve collapses at t={t}: deformed exponential reached zero",
            t=t,
        )
    return u, shifted


def value(spec: ModelSpec, t: float) -> float:
    """Discounted value V(t) = v0 / q_exp(k * tau(t), q)."""
    u, _ = _deformed_argument(spec, t)
    return spec.v0 / q_exp(u, spec.q)


def value_curve(spec: ModelSpec, ts: np.ndarray) -> np.ndarray:
    """Vectorized V over an array of delays (same domain rules as value)."""
    ts = np.asarray(ts, dtype=float)
    if spec.time is None:
        tau = ts
    else:
        tp = spec.time
        arg = 1.0 + tp.b * ts
        if np.any(arg <= 0.0):
            bad = float(ts[np.argmax(arg <= 0.0)])
            raise DomainError(f"subjective time undefined at t={bad} (1 + b*t <= 0)")
        lns = np.log(arg) if tp.s == 0.0 else np.expm1(tp.s * np.log(arg)) / tp.s
        tau = tp.a * lns + tp.c
    u = spec.k * tau
    if spec.q == 0.0:
        return spec.v0 * np.exp(-u)
    qu = spec.q * u
    collapsed = qu <= -1.0
    if np.any(collapsed):
        bad = float(ts[np.argmax(collapsed)])
        raise DivergenceError(
            f"discount curve collapses at t={bad}: deformed exponential reached zero",
            t=bad,
        )
    return spec.v0 * np.exp(-np.log1p(qu) / spec.q)


def discount_rate(spec: ModelSpec, t: float) -> float:
    """Instantaneous discount rate I(t) = -d ln V/dt, in closed form."""
    _, shifted = _deformed_argument(spec, t)
    return spec.k * _tau_prime(spec, t) / shifted


def initial_rate(spec: ModelSpec) -> float:
    """I(0); equals k*a*b with time perception (k without) when c = 0."""
    return discount_rate(spec, 0.0)


def h_component(i: float) -> float:
    """Value-deformation channel H(I) = -I**2."""
    return -(i * i)


def f_component(i: float, b: float, t: float) -> float:
    """Time-perception channel F(I) = -b*I/(1 + b*t)."""
    denom = 1.0 + b * t
    if not denom > 0.0:
        raise DomainError(f"f_component undefined at t={t} (1 + b*t <= 0)")
    return -(b * i) / denom


def decompose_inconsistency(spec: ModelSpec, t: float) -> DecompositionReport:
    """Split dI/dt into q*H(I) plus (1-s)*F(I) at time t."""
    rate = discount_rate(spec, t)
    value_term = spec.q * h_component(rate)
    if spec.time is None:
        time_term = 0.0
    else:
        time_term = (1.0 - spec.time.s) * f_component(rate, spec.time.b, t)
    return DecompositionReport(
        total=value_term + time_term,
        value_term=value_term,
        time_term=time_term,
        rate=rate,
    )


def inconsistency(spec: ModelSpec, t: float) -> float:
    """Inconsistency degree dI/dt; zero iff discounting is exponential in
    objective time."""
    return decompose_inconsistency(spec, t).total


def classify_impulsivity(spec: ModelSpec) -> ImpulsivityRegime:
    """Sign of q decides the impulsivity regime for objective-time models.

    q > 0 means impulsivity decreases with delay, q = 0 keeps it constant,
    q < 0 makes it increase. With a time-perception law attached the rate
    also moves through tau(t) and the sign of q alone no longer decides,
    so such specs are refused.
    """
    if spec.time is not None:
        raise UnsupportedModelError(
            "impulsivity regime by deformation sign is defined only for "
            "objective-time models"
        )
    if spec.q > 0.0:
        return ImpulsivityRegime.DECREASING
    if spec.q == 0.0:
        return ImpulsivityRegime.CONSISTENT
    return ImpulsivityRegime.INCREASING
