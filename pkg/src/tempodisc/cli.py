"""Command-line interface.

Data goes to stdout (or the requested files), diagnostics to stderr.
Exit codes: 0 success, 1 numerical failure (divergence, non-convergence),
2 usage or file-format error. Floats are written with 17 significant
digits so identical runs produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .deformed import TimePerception
from .errors import FormatError, NoCrossingError, TempodiscError
from .fitting import (
    FitConfig,
    FitResult,
    compare_models,
    family_from_token,
    fit_model,
    read_dataset,
)
from .models import ModelSpec, decompose_inconsistency, value
from .numerics import ScheduledReward, crossing_time, reconstruct_from_inconsistency
from .titration import ChoiceAgent, TitrationConfig, run_titration


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _load_spec(path: str) -> ModelSpec:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read model spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"model spec {path} is not valid JSON: {exc}") from exc
    return ModelSpec.from_dict(raw)


def _parse_floats(text: str, what: str) -> list[float]:
    items = [piece for piece in text.split(",") if piece.strip() != ""]
    if not items:
        raise FormatError(f"{what} must be a non-empty comma-separated list")
    try:
        return [float(piece) for piece in items]
    except ValueError as exc:
        raise FormatError(f"{what}: non-numeric entry in {text!r}") from exc


def _parse_reward(text: str, what: str) -> ScheduledReward:
    parts = text.split("@")
    if len(parts) != 2:
        raise FormatError(f"{what} must look like AMOUNT@TIME, got {text!r}")
    try:
        return ScheduledReward(amount=float(parts[0]), delivery_time=float(parts[1]))
    except ValueError as exc:
        raise FormatError(f"{what}: non-numeric field in {text!r}") from exc


@dataclass(frozen=True)
class CurveSample:
    """One row of an evaluated curve table."""

    t: float
    v: float
    i: float
    inc: float
    inc_value_term: float
    inc_time_term: float


def sample_curve(spec: ModelSpec, t0: float, t1: float, samples: int) -> list[CurveSample]:
    if samples < 1:
        raise FormatError(f"need at least one sample, got {samples}")
    if not t1 >= t0:
        raise FormatError(f"need --to >= --from, got {t0} .. {t1}")
    ts = np.linspace(t0, t1, samples)
    rows = []
    for t in ts:
        t = float(t)
        rep = decompose_inconsistency(spec, t)
        rows.append(
            CurveSample(
                t=t,
                v=value(spec, t),
                i=rep.rate,
                inc=rep.total,
                inc_value_term=rep.value_term,
                inc_time_term=rep.time_term,
            )
        )
    return rows


_EVAL_COLUMNS = ("t", "v", "i", "inc", "inc_value_term", "inc_time_term")


def cmd_eval(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    rows = sample_curve(spec, args.t_from, args.t_to, args.samples)
    if args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(_EVAL_COLUMNS)
        for row in rows:
            writer.writerow(
                [_fmt(getattr(row, column)) for column in _EVAL_COLUMNS]
            )
    else:
        for row in rows:
            print(json.dumps({column: getattr(row, column) for column in _EVAL_COLUMNS}))
    return 0


_TABLE_COLUMNS = (
    "value_model",
    "time_model",
    "v",
    "i",
    "inc",
    "inc_value_term",
    "inc_time_term",
    "residual",
)


def cmd_table(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    if spec.time is None:
        raise FormatError(
            "the table command needs a spec with time-perception fields "
            "(s, a, b, c) to populate the perception rows"
        )
    tp = spec.time
    t = args.t
    value_cells = [("exponential", 0.0), ("hyperbolic", 1.0), ("q-deformed", spec.q)]
    time_cells = [
        ("none", None),
        ("weber-fechner", TimePerception(s=0.0, a=tp.a, b=tp.b, c=tp.c)),
        # the pure power law is the a = c*s slice of the unified law; with a
        # shared parameter set these two rows evaluate identically
        ("stevens", tp),
        ("unified", tp),
    ]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(_TABLE_COLUMNS)
    for value_label, q in value_cells:
        for time_label, time in time_cells:
            cell = ModelSpec(v0=spec.v0, k=spec.k, q=q, time=time)
            rep = decompose_inconsistency(cell, t)
            # independent reassembly of dI/dt from the rate, as a cross-check
            direct = -q * rep.rate * rep.rate
            if time is not None:
                direct += (time.s - 1.0) * time.b * rep.rate / (1.0 + time.b * t)
            writer.writerow(
                [
                    value_label,
                    time_label,
                    _fmt(value(cell, t)),
                    _fmt(rep.rate),
                    _fmt(rep.total),
                    _fmt(rep.value_term),
                    _fmt(rep.time_term),
                    _fmt(abs(rep.total - direct)),
                ]
            )
    return 0


def _fit_config(args: argparse.Namespace) -> FitConfig:
    return FitConfig(
        max_evals=args.max_evals,
        tolerance=args.tolerance,
        seed=args.seed,
        restarts=args.restarts,
    )


def _result_dict(result: FitResult) -> dict:
    return {
        "family": result.family.value,
        "params": result.params,
        "spec": None if result.spec is None else result.spec.to_dict(),
        "rss": result.rss,
        "aic": result.aic,
        "n_evals": result.n_evals,
        "converged": result.converged,
        "param_bounds_hit": list(result.param_bounds_hit),
        "error": result.error,
    }


def _families(args: argparse.Namespace):
    tokens = [tok for tok in args.families.split(",") if tok.strip() != ""]
    if not tokens:
        raise FormatError("--families must name at least one family")
    return [family_from_token(tok) for tok in tokens]


def cmd_fit(args: argparse.Namespace) -> int:
    data = read_dataset(args.data, args.v0)
    config = _fit_config(args)
    results = [fit_model(data, family, config) for family in _families(args)]
    print(json.dumps({"results": [_result_dict(r) for r in results]}, indent=2))
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    data = read_dataset(args.data, args.v0)
    config = _fit_config(args)
    ranked = compare_models(data, _families(args), config)
    payload = []
    for rank, result in enumerate(ranked, start=1):
        entry = _result_dict(result)
        entry["rank"] = rank
        payload.append(entry)
    print(json.dumps({"results": payload}, indent=2))
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    delays = _parse_floats(args.delays, "--delays")
    if sorted(set(delays)) != delays:
        raise FormatError("--delays must be strictly increasing and unique")
    config = TitrationConfig(
        delays=tuple(delays),
        delayed_amount=spec.v0,
        start_step=args.start_step,
        min_step=args.min_step,
        max_trials=args.max_trials,
    )
    agent = ChoiceAgent(spec=spec, noise_beta=args.noise_beta, seed=args.seed)
    traces = run_titration(config, agent)
    traces_path = Path(args.traces)
    with open(traces_path, "w") as fh:
        for trace in traces:
            fh.write(
                json.dumps(
                    {
                        "delay": trace.delay,
                        "choices": [[amount, chose] for amount, chose in trace.choices],
                        "v_d": trace.v_d,
                        "v_s": trace.v_s,
                        "indifference": trace.indifference,
                    }
                )
            )
            fh.write("\n")
    dataset_path = Path(args.dataset)
    floor = 1e-9 * spec.v0
    with open(dataset_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["delay", "value"])
        for trace in traces:
            clamped = min(max(trace.indifference, floor), spec.v0)
            writer.writerow([_fmt(trace.delay), _fmt(clamped)])
    with open(dataset_path.with_suffix(".json"), "w") as fh:
        json.dump({"v0": spec.v0}, fh)
        fh.write("\n")
    print(f"wrote {traces_path} and {dataset_path}", file=sys.stderr)
    return 0


def cmd_reversal(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    smaller = _parse_reward(args.smaller, "--smaller")
    larger = _parse_reward(args.larger, "--larger")
    try:
        t_cross = crossing_time(smaller, larger, spec)
    except NoCrossingError as exc:
        print(f"note: {exc}", file=sys.stderr)
        print("no crossing")
        return 0
    print(_fmt(t_cross))
    return 0


def cmd_reconstruct(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    result = reconstruct_from_inconsistency(spec, args.t_from, args.t_to, args.steps)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["t", "rate", "value"])
    for t, rate, val in zip(result.ts, result.rates, result.values):
        writer.writerow([_fmt(t), _fmt(rate), _fmt(val)])
    print(
        f"max_rate_error={_fmt(result.max_rate_error)} "
        f"max_value_error={_fmt(result.max_value_error)}",
        file=sys.stderr,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempodisc",
        description="Deformed-exponential discounting toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="sample V, I, and inconsistency on a grid")
    p_eval.add_argument("spec", help="model spec JSON file")
    p_eval.add_argument("--from", dest="t_from", type=float, default=0.0)
    p_eval.add_argument("--to", dest="t_to", type=float, required=True)
    p_eval.add_argument("--samples", type=int, default=101)
    p_eval.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p_eval.set_defaults(func=cmd_eval)

    p_table = sub.add_parser(
        "table", help="evaluate all twelve value x perception cells at one time"
    )
    p_table.add_argument("spec", help="model spec JSON file (needs s, a, b, c)")
    p_table.add_argument("--t", type=float, required=True)
    p_table.set_defaults(func=cmd_table)

    for name, func, ranked in (("fit", cmd_fit, False), ("compare", cmd_compare, True)):
        p = sub.add_parser(
            name,
            help=(
                "fit families and rank them by AIC"
                if ranked
                else "fit families to an indifference-point dataset"
            ),
        )
        p.add_argument("data", help='dataset CSV with header "delay,value"')
        p.add_argument("--v0", type=float, default=None, help="objective amount (or use a JSON sidecar)")
        p.add_argument("--families", default="exp,hyp,expwf,stevens")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=16)
        p.add_argument("--max-evals", type=int, default=4000)
        p.add_argument("--tolerance", type=float, default=1e-12)
        p.set_defaults(func=func)

    p_sim = sub.add_parser("simulate", help="titrate indifference points per delay")
    p_sim.add_argument("spec", help="model spec JSON file")
    p_sim.add_argument("--delays", required=True, help="comma-separated delays")
    p_sim.add_argument("--noise-beta", type=float, default=0.0)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--start-step", type=float, default=None)
    p_sim.add_argument("--min-step", type=float, default=None)
    p_sim.add_argument("--max-trials", type=int, default=10_000)
    p_sim.add_argument("--traces", default="traces.jsonl", help="trace JSONL path")
    p_sim.add_argument("--dataset", default="dataset.csv", help="dataset CSV path")
    p_sim.set_defaults(func=cmd_simulate)

    p_rev = sub.add_parser("reversal", help="preference-reversal crossing time")
    p_rev.add_argument("spec", help="model spec JSON file")
    p_rev.add_argument("--smaller", required=True, help="AMOUNT@TIME")
    p_rev.add_argument("--larger", required=True, help="AMOUNT@TIME")
    p_rev.set_defaults(func=cmd_reversal)

    p_rec = sub.add_parser(
        "reconstruct", help="integrate the decomposed inconsistency back to V"
    )
    p_rec.add_argument("spec", help="model spec JSON file")
    p_rec.add_argument("--from", dest="t_from", type=float, default=0.0)
    p_rec.add_argument("--to", dest="t_to", type=float, required=True)
    p_rec.add_argument("--steps", type=int, default=4096)
    p_rec.set_defaults(func=cmd_reconstruct)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TempodiscError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
