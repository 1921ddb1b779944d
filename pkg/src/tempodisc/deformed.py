"""Deformed exponential/logarithm kernel and subjective-time mappings.

The one-parameter deformation generalizes exp/ln:

    q_exp(x, q) = (1 + q*x)**(1/q)   on 1 + q*x >= 0, zero past the cutoff
    q_log(x, q) = (x**q - 1) / q     on x > 0

with the ordinary exponential and logarithm recovered as q -> 0. The two
are inverse to each other on the nonzero branch. Subjective time follows

    tau(t) = a * ln_s(1 + b*t) + c

which contains the logarithmic law at s = 0 and the power law
tau = c*(1+bt)**s on the slice a = c*s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# Deformation parameters are plain floats; q = 0 is the undeformed case.
Deformation = float


def q_exp(x: float, q: float) -> float:
    """Deformed exponential (1 + q*x)**(1/q); exp(x) at q = 0.

    Returns 0.0 past the cutoff q*x < -1. Evaluated as
    exp(log1p(q*x)/q), which is exact algebraically and keeps full
    precision when \\|q\\| is tiny, where a literal power would round
    1 + q*x first and lose the tail.
    """
    if q == 0.0:
        try:
            return math.exp(x)
        except OverflowError:
            return math.inf
    qx = q * x
    if qx < -1.0:
        return 0.0
    if qx == -1.0:
        # 0**(1/q): zero for positive exponent, divergent for negative
        return 0.0 if q > 0.0 else math.inf
    try:
        return math.exp(math.log1p(qx) / q)
    except OverflowError:
        return math.inf


def q_log(x: float, q: float) -> float:
    """Deformed logarithm (x**q - 1)/q for x > 0; ln(x) at q = 0."""
    if not x > 0.0:
        raise DomainError(f"q_log needs x > 0, got {x}")
    if q == 0.0:
        return math.log(x)
    # expm1(q*log x) = x**q - 1 without cancellation for small q
    return math.expm1(q * math.log(x)) / q


@dataclass(frozen=True)
class TimePerception:
    """Subjective-time law tau(t) = a * ln_s(1 + b*t) + c.

    s = 0 gives the logarithmic (Weber-Fechner) regime, s != 0 the
    power-law (Stevens) regime; a scales sensitivity, b is the rate of
    the time stimulus, and c is the basal sensitivity (default 0).
    """

    s: float
    a: float
    b: float
    c: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise DomainError(f"sensitivity scale a must be > 0, got {self.a}")
        if not (math.isfinite(self.b) and self.b > 0.0):
            raise DomainError(f"stimulus rate b must be > 0, got {self.b}")
        if not (math.isfinite(self.c) and self.c >= 0.0):
            raise DomainError(f"basal sensitivity c must be >= 0, got {self.c}")
        if not math.isfinite(self.s):
            raise DomainError(f"perception exponent s must be finite, got {self.s}")

    @classmethod
    def stevens(cls, c: float, b: float, s: float) -> "TimePerception":
        """Pure power-law slice tau = c*(1+bt)**s, realized via a = c*s."""
        if not (c > 0.0 and s > 0.0):
            raise DomainError("power-law perception needs c > 0 and s > 0")
        return cls(s=s, a=c * s, b=b, c=c)


def subjective_time(t: float, perception: TimePerception) -> float:
    """Map an objective delay t to subjective time a*ln_s(1+bt) + c."""
    arg = 1.0 + perception.b * t
    if not arg > 0.0:
        raise DomainError(f"subjective time undefined at t={t} (1 + b*t <= 0)")
    return perception.a * q_log(arg, perception.s) + perception.c


def weber_fraction(phi_c: float, phi_p: float) -> float:
    """Relative increment (phi_c - phi_p)/phi_p over a reference stimulus."""
    if not phi_p > 0.0:
        raise DomainError(f"reference stimulus must be > 0, got {phi_p}")
    return (phi_c - phi_p) / phi_p
