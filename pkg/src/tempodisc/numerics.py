"""Finite differences, fixed-step reconstruction, and reversal timing."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoCrossingError, StepFailureError
from .models import ModelSpec, discount_rate, f_component, h_component, value

_SCAN_POINTS = 1024


def central_difference(f: Callable[[float], float], t: float, order: int = 1) -> float:
    """Fourth-order central-difference derivative of f at t (order 1 or 2).

    Step size h = max(1e-5, 1e-5*|t|); f must be evaluable on [t-2h, t+2h].
    """
    if order not in (1, 2):
        raise DomainError(f"derivative order must be 1 or 2, got {order}")
    h = max(1e-5, 1e-5 * abs(t))
    fm2 = f(t - 2.0 * h)
    fm1 = f(t - h)
    fp1 = f(t + h)
    fp2 = f(t + 2.0 * h)
    if order == 1:
        return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    f0 = f(t)
    return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)


@dataclass(frozen=True)
class ReconstructionResult:
    """Grid of reconstructed (t, I, V) plus worst relative errors.

    ts/rates/values are aligned arrays over the integration grid;
    max_rate_error and max_value_error compare against the closed forms.
    """

    ts: np.ndarray
    rates: np.ndarray
    values: np.ndarray
    max_rate_error: float
    max_value_error: float

    @property
    def grid(self) -> list[tuple[float, float, float]]:
        return list(zip(self.ts.tolist(), self.rates.tolist(), self.values.tolist()))


def reconstruct_from_inconsistency(
    spec: ModelSpec, t0: float, t1: float, steps: int = 4096
) -> ReconstructionResult:
    """Rebuild I and V by integrating the decomposed inconsistency.

    Classical fixed-step RK4 on the coupled system

        dI/dt = q*H(I) + (1-s)*F(I, t)        (F dropped without perception)
        dV/dt = -I*V

    started from the closed-form I(t0), V(t0). The rate equation is driven
    by the additive H/F split as a function of the running state, not by
    the closed-form inconsistency curve, so the decomposition itself is
    what gets tested. Raises StepFailureError if the state leaves the
    finite positive region.
    """
    if not (math.isfinite(t0) and math.isfinite(t1) and 0.0 <= t0 < t1):
        raise DomainError(f"need 0 <= t0 < t1, got t0={t0}, t1={t1}")
    if steps < 16:
        raise DomainError(f"need at least 16 steps, got {steps}")

    q = spec.q
    if spec.time is None:
        def rate_slope(i: float, t: float) -> float:
            return q * h_component(i)
    else:
        s = spec.time.s
        b = spec.time.b

        def rate_slope(i: float, t: float) -> float:
            return q * h_component(i) + (1.0 - s) * f_component(i, b, t)

    h = (t1 - t0) / steps
    ts = t0 + h * np.arange(steps + 1)
    rates = np.empty(steps + 1)
    values = np.empty(steps + 1)
    i_cur = discount_rate(spec, t0)
    v_cur = value(spec, t0)
    rates[0] = i_cur
    values[0] = v_cur

    for n in range(steps):
        t = t0 + n * h
        k1i = rate_slope(i_cur, t)
        k1v = -i_cur * v_cur
        tm = t + 0.5 * h
        i2 = i_cur + 0.5 * h * k1i
        v2 = v_cur + 0.5 * h * k1v
        k2i = rate_slope(i2, tm)
        k2v = -i2 * v2
        i3 = i_cur + 0.5 * h * k2i
        v3 = v_cur + 0.5 * h * k2v
        k3i = rate_slope(i3, tm)
        k3v = -i3 * v3
        tn = t + h
        i4 = i_cur + h * k3i
        v4 = v_cur + h * k3v
        k4i = rate_slope(i4, tn)
        k4v = -i4 * v4
        i_cur = i_cur + (h / 6.0) * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
        v_cur = v_cur + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not (math.isfinite(i_cur) and math.isfinite(v_cur)) or v_cur <= 0.0:
            raise StepFailureError(
                f"reconstruction state became invalid at t={tn}", t=tn
            )
        rates[n + 1] = i_cur
        values[n + 1] = v_cur

    max_rate_error = 0.0
    max_value_error = 0.0
    for j in range(steps + 1):
        t = float(ts[j])
        i_ref = discount_rate(spec, t)
        v_ref = value(spec, t)
        max_rate_error = max(max_rate_error, abs(rates[j] - i_ref) / abs(i_ref))
        max_value_error = max(max_value_error, abs(values[j] - v_ref) / abs(v_ref))

    return ReconstructionResult(
        ts=ts,
        rates=rates,
        values=values,
        max_rate_error=max_rate_error,
        max_value_error=max_value_error,
    )


@dataclass(frozen=True)
class ScheduledReward:
    """A reward amount promised for an absolute delivery time."""

    amount: float
    delivery_time: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.amount) and self.amount > 0.0):
            raise DomainError(f"reward amount must be > 0, got {self.amount}")
        if not (math.isfinite(self.delivery_time) and self.delivery_time >= 0.0):
            raise DomainError(
                f"delivery time must be >= 0, got {self.delivery_time}"
            )


def crossing_time(
    smaller: ScheduledReward, larger: ScheduledReward, spec: ModelSpec
) -> float:
    """Decision time where the two present-value curves intersect.

    The present value of a reward (A, T) at decision time tau is
    A * V(T - tau)/v0. The difference is scanned on a dense grid over
    [0, smaller.delivery_time) for a sign change, then the bracketing
    interval is polished with a bisection/secant hybrid to 1e-9 absolute
    (tighter in practice). Raises NoCrossingError when the difference
    keeps one sign, including the degenerate case where the smaller
    reward dominates outright.
    """
    if not smaller.delivery_time < larger.delivery_time:
        raise DomainError("smaller reward must be delivered strictly earlier")
    if smaller.amount >= larger.amount:
        raise NoCrossingError(
            "smaller-sooner reward dominates everywhere (amount is not smaller)"
        )
    t_s = smaller.delivery_time
    if t_s == 0.0:
        raise NoCrossingError("smaller reward is immediate: no decision window")

    def gap(tau: float) -> float:
        pv_small = smaller.amount * value(spec, smaller.delivery_time - tau) / spec.v0
        pv_large = larger.amount * value(spec, larger.delivery_time - tau) / spec.v0
        return pv_small - pv_large

    taus = np.linspace(0.0, t_s, _SCAN_POINTS, endpoint=False)
    gaps = np.array([gap(float(x)) for x in taus])
    zero_hits = np.flatnonzero(gaps == 0.0)
    if zero_hits.size:
        return float(taus[zero_hits[0]])
    flips = np.flatnonzero(np.sign(gaps[:-1]) != np.sign(gaps[1:]))
    if flips.size == 0:
        raise NoCrossingError(
            f"present-value difference keeps one sign over [0, {t_s}) "
            f"({_SCAN_POINTS}-point scan)"
        )
    j = int(flips[0])
    return float(brentq(gap, float(taus[j]), float(taus[j + 1]), xtol=1e-12))
