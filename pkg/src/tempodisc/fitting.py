"""Model fitting over indifference-point data and AIC-based comparison.

Each family is a slice of the model grid with its own free parameters;
time-perception families fix a = 1 because only the product g = k*a is
identifiable from a discount curve. Fitting minimizes the residual sum
of squares with a derivative-free simplex search restarted from seeded
random draws; positive parameters are searched on a log scale and
bounded shape parameters through a logistic squash, so the simplex
itself is unconstrained.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, logit

from .deformed import TimePerception
from .errors import (
    DomainError,
    FormatError,
    InsufficientDataError,
    TempodiscError,
)
from .models import ModelSpec, value_curve

_RSS_FLOOR = 1e-300
# worst-case objective for rejected candidates; finite so the simplex can
# compare values without inf-inf noise
_PENALTY = 1e300


@dataclass(frozen=True, eq=False)
class IndifferenceDataset:
    """Observed (delay, subjective value) pairs for one objective amount v0.

    Delays must be strictly increasing and values must lie in (0, v0].
    """

    v0: float
    delays: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "delays", np.asarray(self.delays, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if not (math.isfinite(self.v0) and self.v0 > 0.0):
            raise DomainError(f"v0 must be > 0, got {self.v0}")
        if self.delays.ndim != 1 or self.delays.size == 0:
            raise DomainError("need at least one (delay, value) point")
        if self.delays.shape != self.values.shape:
            raise DomainError("delays and values must have matching lengths")
        if not np.all(np.isfinite(self.delays)) or not np.all(np.isfinite(self.values)):
            raise DomainError("delays and values must be finite")
        if np.any(self.delays < 0.0):
            raise DomainError("delays must be >= 0")
        if np.any(np.diff(self.delays) <= 0.0):
            raise DomainError("delays must be strictly increasing (no duplicates)")
        if np.any(self.values <= 0.0) or np.any(self.values > self.v0):
            raise DomainError("values must lie in (0, v0]")

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.delays.tolist(), self.values.tolist()))

    def __len__(self) -> int:
        return int(self.delays.size)


def read_dataset(csv_path: str | Path, v0: float | None = None) -> IndifferenceDataset:
    """Load a dataset CSV with header exactly ``delay,value``.

    Rows are sorted by delay; duplicate delays are rejected. When v0 is
    not given, a JSON sidecar next to the CSV (same name, .json suffix)
    must provide {"v0": ...}.
    """
    path = Path(csv_path)
    if v0 is None:
        sidecar = path.with_suffix(".json")
        try:
            with open(sidecar) as fh:
                side = json.load(fh)
        except OSError as exc:
            raise FormatError(
                f"v0 not given and sidecar {sidecar} is unreadable: {exc}"
            ) from exc
        except json.JSONDecodeError as exc:
            raise FormatError(f"sidecar {sidecar} is not valid JSON: {exc}") from exc
        if not isinstance(side, dict) or "v0" not in side:
            raise FormatError(f'sidecar {sidecar} must be an object with "v0"')
        v0 = float(side["v0"])
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise FormatError(f"cannot read dataset {path}: {exc}") from exc
    if not rows or rows[0] != ["delay", "value"]:
        raise FormatError('dataset CSV must start with the exact header "delay,value"')
    points = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise FormatError(f"{path}:{lineno}: expected two columns")
        try:
            points.append((float(row[0]), float(row[1])))
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: non-numeric field") from exc
    points.sort(key=lambda p: p[0])
    delays = np.array([p[0] for p in points])
    values = np.array([p[1] for p in points])
    try:
        return IndifferenceDataset(v0=v0, delays=delays, values=values)
    except DomainError as exc:
        raise FormatError(f"invalid dataset {path}: {exc}") from exc


class ModelFamily(Enum):
    EXPONENTIAL = "exp"
    HYPERBOLIC = "hyp"
    Q_GENERALIZED = "qgen"
    EXP_WEBER_FECHNER = "expwf"
    EXP_STEVENS = "stevens"
    UNIFIED = "unified"
    HYP_WEBER_FECHNER = "hypwf"
    HYP_UNIFIED = "hypunified"
    Q_UNIFIED = "qunified"


@dataclass(frozen=True)
class _Param:
    """Search-space description of one free parameter.

    log=True: positive parameter, simplex coordinate is ln(value), random
    starts are log-uniform on [lo, hi]. log=False: box-constrained through
    a logistic squash onto (lo, hi), random starts uniform.
    """

    name: str
    lo: float
    hi: float
    log: bool = True


@dataclass(frozen=True)
class _FamilyDef:
    params: tuple[_Param, ...]
    build: Callable[[dict[str, float], float], ModelSpec]


def _k_only(q: float):
    def build(p: dict[str, float], v0: float) -> ModelSpec:
        return ModelSpec(v0=v0, k=p["k"], q=q)

    return build


def _perception(q: float, s_from: str | None):
    def build(p: dict[str, float], v0: float) -> ModelSpec:
        s = p[s_from] if s_from else 0.0
        qv = p.get("q", q)
        return ModelSpec(
            v0=v0,
            k=p["g"],
            q=qv,
            time=TimePerception(s=s, a=1.0, b=p["b"]),
        )

    return build


def _build_stevens(p: dict[str, float], v0: float) -> ModelSpec:
    # power-law perception tau = c*(1+bt)**s with c = 1, so a = c*s = s
    # and the fitted k_p absorbs the k*c product
    return ModelSpec(
        v0=v0,
        k=p["k_p"],
        q=0.0,
        time=TimePerception(s=p["s"], a=p["s"], b=p["b"], c=1.0),
    )


_K = _Param("k", 1e-4, 10.0)
_G = _Param("g", 1e-3, 10.0)
_B = _Param("b", 1e-4, 10.0)
_Q = _Param("q", -2.0, 3.0, log=False)
_S_BOX = _Param("s", -1.0, 2.0, log=False)
_S_POS = _Param("s", 0.05, 2.0)  # power law needs s > 0

_FAMILIES: dict[ModelFamily, _FamilyDef] = {
    ModelFamily.EXPONENTIAL: _FamilyDef((_K,), _k_only(0.0)),
    ModelFamily.HYPERBOLIC: _FamilyDef((_K,), _k_only(1.0)),
    ModelFamily.Q_GENERALIZED: _FamilyDef(
        (_Q, _K),
        lambda p, v0: ModelSpec(v0=v0, k=p["k"], q=p["q"]),
    ),
    ModelFamily.EXP_WEBER_FECHNER: _FamilyDef((_G, _B), _perception(0.0, None)),
    ModelFamily.EXP_STEVENS: _FamilyDef((_Param("k_p", 1e-3, 10.0), _B, _S_POS), _build_stevens),
    ModelFamily.UNIFIED: _FamilyDef((_G, _B, _S_BOX), _perception(0.0, "s")),
    ModelFamily.HYP_WEBER_FECHNER: _FamilyDef((_G, _B), _perception(1.0, None)),
    ModelFamily.HYP_UNIFIED: _FamilyDef((_G, _B, _S_BOX), _perception(1.0, "s")),
    ModelFamily.Q_UNIFIED: _FamilyDef((_Q, _S_BOX, _G, _B), _perception(0.0, "s")),
}

_FAMILY_ORDER = {fam: i for i, fam in enumerate(ModelFamily)}


def family_from_token(token: str) -> ModelFamily:
    for fam in ModelFamily:
        if fam.value == token:
            return fam
    known = ", ".join(f.value for f in ModelFamily)
    raise FormatError(f"unknown model family {token!r} (known: {known})")


def param_count(family: ModelFamily) -> int:
    return len(_FAMILIES[family].params)


def _to_native(param: _Param, theta: float) -> float:
    if param.log:
        return math.exp(theta)
    return param.lo + (param.hi - param.lo) * float(expit(theta))


def _from_native(param: _Param, x: float) -> float:
    if param.log:
        return math.log(x)
    frac = (x - param.lo) / (param.hi - param.lo)
    return float(logit(frac))


def _decode(defn: _FamilyDef, theta: np.ndarray) -> dict[str, float]:
    return {p.name: _to_native(p, float(th)) for p, th in zip(defn.params, theta)}


def _draw_start(defn: _FamilyDef, rng: np.random.Generator) -> np.ndarray:
    theta = np.empty(len(defn.params))
    for idx, p in enumerate(defn.params):
        if p.log:
            theta[idx] = rng.uniform(math.log(p.lo), math.log(p.hi))
        else:
            theta[idx] = _from_native(p, rng.uniform(p.lo + 1e-9, p.hi - 1e-9))
    return theta


def aic(rss: float, n: int, p: int) -> float:
    """Akaike score n*ln(rss/n) + 2p, with rss floored at 1e-300."""
    if not rss >= 0.0:
        raise DomainError(f"rss must be >= 0, got {rss}")
    if n <= 0:
        raise DomainError(f"need n > 0 data points, got {n}")
    return n * math.log(max(rss, _RSS_FLOOR) / n) + 2.0 * p


@dataclass(frozen=True)
class FitConfig:
    max_evals: int = 4000  # simplex evaluations per start
    tolerance: float = 1e-12  # simplex size / function-spread target
    seed: int = 0
    restarts: int = 16

    def __post_init__(self) -> None:
        if self.max_evals < 10:
            raise DomainError("max_evals must be >= 10")
        if not 0.0 < self.tolerance < 1.0:
            raise DomainError("tolerance must be in (0, 1)")
        if self.seed < 0:
            raise DomainError("seed must be >= 0")
        if self.restarts < 1:
            raise DomainError("restarts must be >= 1")


@dataclass(frozen=True)
class FitResult:
    family: ModelFamily
    spec: ModelSpec | None
    params: dict[str, float]
    rss: float
    aic: float
    n_evals: int
    converged: bool
    param_bounds_hit: tuple[bool, ...]
    error: str | None = None


def _objective(defn: _FamilyDef, data: IndifferenceDataset):
    delays = data.delays
    observed = data.values
    v0 = data.v0

    def fun(theta: np.ndarray) -> float:
        try:
            spec = defn.build(_decode(defn, theta), v0)
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                resid = value_curve(spec, delays) - observed
        except (TempodiscError, OverflowError):
            return _PENALTY  # divergent candidate: rejected, not fatal
        rss = float(resid @ resid)
        return rss if math.isfinite(rss) and rss < _PENALTY else _PENALTY

    return fun


def _bounds_hit(defn: _FamilyDef, theta: np.ndarray) -> tuple[bool, ...]:
    flags = []
    for p, th in zip(defn.params, theta):
        if p.log:
            x = math.exp(float(th))
            flags.append(not (p.lo / 1e3 <= x <= p.hi * 1e3))
        else:
            flags.append(abs(float(th)) > 8.0)  # squashed to ~3e-4 of an edge
    return tuple(flags)


def fit_model(
    data: IndifferenceDataset,
    family: ModelFamily,
    config: FitConfig = FitConfig(),
) -> FitResult:
    """Fit one family by restarted Nelder-Mead simplex on the RSS.

    Parameters
    ----------
    data : IndifferenceDataset
        Needs strictly more points than the family has free parameters.
    family : ModelFamily
        Which slice of the model grid to fit.
    config : FitConfig
        Search budget and seeding. Starts are drawn from per-(family,
        restart) random streams, and the best candidate is picked by
        (rss, restart index), so results do not depend on evaluation
        order or thread scheduling.

    Returns
    -------
    FitResult with the fitted spec, rss, AIC, and search diagnostics.
    """
    defn = _FAMILIES[family]
    p = len(defn.params)
    n = len(data)
    if n <= p:
        raise InsufficientDataError(
            f"{family.value} has {p} parameters; need more than {p} points, got {n}"
        )
    fun = _objective(defn, data)
    options = {
        "maxfev": config.max_evals,
        "xatol": 1e-8,
        "fatol": config.tolerance,
        "adaptive": p > 2,
    }
    best: tuple[float, int, np.ndarray, bool] | None = None
    n_evals = 0
    for restart in range(config.restarts):
        rng = np.random.default_rng([config.seed, _FAMILY_ORDER[family], restart])
        theta0 = _draw_start(defn, rng)
        res = minimize(fun, theta0, method="Nelder-Mead", options=options)
        n_evals += int(res.nfev)
        fval = float(res.fun) if math.isfinite(res.fun) else _PENALTY
        if best is None or (fval, restart) < (best[0], best[1]):
            best = (fval, restart, np.asarray(res.x, dtype=float), bool(res.success))
    assert best is not None
    if best[0] >= _PENALTY:
        return FitResult(
            family=family,
            spec=None,
            params={},
            rss=math.inf,
            aic=math.inf,
            n_evals=n_evals,
            converged=False,
            param_bounds_hit=tuple(False for _ in defn.params),
            error="no simplex start produced a finite objective",
        )
    polish = minimize(
        fun,
        best[2],
        method="Nelder-Mead",
        options={
            "maxfev": config.max_evals,
            "xatol": 1e-12,
            "fatol": config.tolerance * 1e-4,
            "adaptive": p > 2,
        },
    )
    n_evals += int(polish.nfev)
    theta = np.asarray(polish.x, dtype=float)
    rss = float(polish.fun)
    if not math.isfinite(rss) or rss > best[0]:
        theta, rss = best[2], best[0]
    params = _decode(defn, theta)
    spec = defn.build(params, data.v0)
    return FitResult(
        family=family,
        spec=spec,
        params=params,
        rss=rss,
        aic=aic(rss, n, p),
        n_evals=n_evals,
        converged=best[3] or bool(polish.success),
        param_bounds_hit=_bounds_hit(defn, theta),
    )


def compare_models(
    data: IndifferenceDataset,
    families: Sequence[ModelFamily],
    config: FitConfig = FitConfig(),
) -> list[FitResult]:
    """Fit every family and rank by AIC (ties: fewer parameters, then
    family declaration order). Per-family failures are recorded as
    non-converged results with infinite AIC rather than raised."""
    if len(families) == 0:
        raise DomainError("need at least one family to compare")
    results = []
    for family in families:
        try:
            results.append(fit_model(data, family, config))
        except TempodiscError as exc:
            results.append(
                FitResult(
                    family=family,
                    spec=None,
                    params={},
                    rss=math.inf,
                    aic=math.inf,
                    n_evals=0,
                    converged=False,
                    param_bounds_hit=tuple(False for _ in _FAMILIES[family].params),
                    error=str(exc),
                )
            )
    results.sort(
        key=lambda r: (r.aic, param_count(r.family), _FAMILY_ORDER[r.family])
    )
    return results
