"""Dataset handling, AIC, per-family fits, and model ranking."""

import json
import math

import numpy as np
import pytest

from tempodisc import (
    DomainError,
    FitConfig,
    FormatError,
    IndifferenceDataset,
    InsufficientDataError,
    ModelFamily,
    ModelSpec,
    TimePerception,
    aic,
    compare_models,
    family_from_token,
    fit_model,
    generate_dataset,
    param_count,
    read_dataset,
)

GEOMETRIC_DELAYS = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0]
FAST = FitConfig(seed=0, restarts=6)


class TestDataset:
    def test_accepts_sorted_points(self):
        data = IndifferenceDataset(10.0, [1.0, 2.0, 5.0], [9.0, 8.0, 6.0])
        assert len(data) == 3
        assert data.points == [(1.0, 9.0), (2.0, 8.0), (5.0, 6.0)]

    @pytest.mark.parametrize(
        "delays,values",
        [
            ([], []),
            ([2.0, 1.0], [5.0, 6.0]),  # unsorted
            ([1.0, 1.0], [5.0, 6.0]),  # duplicate delay
            ([1.0, 2.0], [5.0, 11.0]),  # value above v0
            ([1.0, 2.0], [5.0, 0.0]),  # value at zero
            ([1.0, 2.0], [5.0, math.nan]),
            ([-1.0, 2.0], [5.0, 5.0]),
        ],
    )
    def test_rejects_malformed(self, delays, values):
        with pytest.raises(DomainError):
            IndifferenceDataset(10.0, delays, values)

    def test_rejects_bad_v0(self):
        with pytest.raises(DomainError):
            IndifferenceDataset(0.0, [1.0], [0.5])


class TestReadDataset:
    def write(self, tmp_path, text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text)
        return path

    def test_reads_and_sorts(self, tmp_path):
        path = self.write(tmp_path, "delay,value\n5,6\n1,9\n2,8\n")
        data = read_dataset(path, v0=10.0)
        assert data.points == [(1.0, 9.0), (2.0, 8.0), (5.0, 6.0)]

    def test_header_must_be_exact(self, tmp_path):
        path = self.write(tmp_path, "delay,amount\n1,9\n")
        with pytest.raises(FormatError):
            read_dataset(path, v0=10.0)
        with pytest.raises(FormatError):
            read_dataset(self.write(tmp_path, "", name="empty.csv"), v0=10.0)

    def test_duplicate_delays_rejected(self, tmp_path):
        path = self.write(tmp_path, "delay,value\n1,9\n1,8\n")
        with pytest.raises(FormatError):
            read_dataset(path, v0=10.0)

    def test_non_numeric_rejected(self, tmp_path):
        path = self.write(tmp_path, "delay,value\n1,soon\n")
        with pytest.raises(FormatError):
            read_dataset(path, v0=10.0)

    def test_wrong_column_count_rejected(self, tmp_path):
        path = self.write(tmp_path, "delay,value\n1,9,0\n")
        with pytest.raises(FormatError):
            read_dataset(path, v0=10.0)

    def test_sidecar_provides_v0(self, tmp_path):
        path = self.write(tmp_path, "delay,value\n1,9\n")
        (tmp_path / "data.json").write_text('{"v0": 10.0}\n')
        data = read_dataset(path)
        assert data.v0 == 10.0

    def test_missing_sidecar_is_a_format_error(self, tmp_path):
        path = self.write(tmp_path, "delay,value\n1,9\n")
        with pytest.raises(FormatError):
            read_dataset(path)

    def test_bad_sidecar_payload(self, tmp_path):
        path = self.write(tmp_path, "delay,value\n1,9\n")
        (tmp_path / "data.json").write_text('{"amount": 10.0}\n')
        with pytest.raises(FormatError):
            read_dataset(path)


class TestAic:
    def test_arithmetic(self):
        assert aic(1.0, 10, 1) == pytest.approx(10.0 * math.log(0.1) + 2.0, rel=1e-15)
        assert aic(10.0, 10, 0) == 0.0
        assert aic(float(7), 7, 0) == 0.0

    def test_monotone_in_parameter_count(self):
        assert aic(1.0, 10, 2) == aic(1.0, 10, 1) + 2.0

    def test_zero_rss_floors_instead_of_failing(self):
        # perfect fits happen on noiseless data; the floor keeps AIC finite
        assert math.isfinite(aic(0.0, 10, 1))
        assert aic(0.0, 10, 1) < aic(1e-200, 10, 1) <= aic(1e-100, 10, 1)

    def test_rejects_nonsense(self):
        with pytest.raises(DomainError):
            aic(-1.0, 10, 1)
        with pytest.raises(DomainError):
            aic(1.0, 0, 0)


class TestFamilies:
    def test_token_round_trip(self):
        for fam in ModelFamily:
            assert family_from_token(fam.value) is fam
        with pytest.raises(FormatError):
            family_from_token("quasi")

    def test_parameter_counts(self):
        expected = {
            ModelFamily.EXPONENTIAL: 1,
            ModelFamily.HYPERBOLIC: 1,
            ModelFamily.Q_GENERALIZED: 2,
            ModelFamily.EXP_WEBER_FECHNER: 2,
            ModelFamily.EXP_STEVENS: 3,
            ModelFamily.UNIFIED: 3,
            ModelFamily.HYP_WEBER_FECHNER: 2,
            ModelFamily.HYP_UNIFIED: 3,
            ModelFamily.Q_UNIFIED: 4,
        }
        for fam, count in expected.items():
            assert param_count(fam) == count


class TestFitModel:
    def test_recovers_hyperbolic_k(self):
        truth = ModelSpec(100.0, 0.2, 1.0)
        data = generate_dataset(truth, GEOMETRIC_DELAYS)
        result = fit_model(data, ModelFamily.HYPERBOLIC, FAST)
        assert abs(result.params["k"] - 0.2) / 0.2 <= 1e-3
        assert result.rss <= 1e-12
        assert result.converged
        assert result.spec.q == 1.0

    def test_recovers_exponential_k(self):
        truth = ModelSpec(100.0, 0.1, 0.0)
        data = generate_dataset(truth, GEOMETRIC_DELAYS)
        result = fit_model(data, ModelFamily.EXPONENTIAL, FAST)
        assert abs(result.params["k"] - 0.1) <= 1e-6 * 0.1
        assert result.rss <= 1e-14

    def test_recovers_two_parameter_families(self):
        truth = ModelSpec(100.0, 1.2, 0.0, TimePerception(s=0.0, a=1.0, b=0.05))
        data = generate_dataset(truth, GEOMETRIC_DELAYS)
        result = fit_model(data, ModelFamily.EXP_WEBER_FECHNER, FAST)
        assert result.params["g"] == pytest.approx(1.2, rel=1e-4)
        assert result.params["b"] == pytest.approx(0.05, rel=1e-4)

    def test_deformed_family_finds_the_hyperbolic_slice(self):
        truth = ModelSpec(100.0, 0.2, 1.0)
        data = generate_dataset(truth, GEOMETRIC_DELAYS)
        result = fit_model(data, ModelFamily.Q_GENERALIZED, FAST)
        assert result.params["q"] == pytest.approx(1.0, abs=1e-3)
        assert result.params["k"] == pytest.approx(0.2, rel=1e-3)

    def test_noiseless_recovery_sweep(self):
        # every 1- and 2-parameter family round-trips its own generator
        # well inside 0.5% across seeds
        families = (
            ModelFamily.EXPONENTIAL,
            ModelFamily.HYPERBOLIC,
            ModelFamily.Q_GENERALIZED,
            ModelFamily.EXP_WEBER_FECHNER,
            ModelFamily.HYP_WEBER_FECHNER,
        )
        worst = 0.0
        for seed in range(50):
            rng = np.random.default_rng(seed)
            for fam in families:
                if fam is ModelFamily.EXPONENTIAL:
                    truth = {"k": rng.uniform(0.02, 0.5)}
                    spec = ModelSpec(100.0, truth["k"], 0.0)
                elif fam is ModelFamily.HYPERBOLIC:
                    truth = {"k": rng.uniform(0.02, 0.5)}
                    spec = ModelSpec(100.0, truth["k"], 1.0)
                elif fam is ModelFamily.Q_GENERALIZED:
                    q = rng.uniform(-0.5, 2.0)
                    # negative q needs q*k*t > -1 out to t = 128
                    kmax = 0.5 if q >= 0.0 else min(0.5, 0.7 / (abs(q) * 128.0))
                    k = rng.uniform(0.02, kmax) if kmax > 0.02 else 0.8 * kmax
                    truth = {"q": q, "k": k}
                    spec = ModelSpec(100.0, k, q)
                else:
                    truth = {"g": rng.uniform(0.3, 2.5), "b": rng.uniform(0.02, 1.0)}
                    q = 0.0 if fam is ModelFamily.EXP_WEBER_FECHNER else 1.0
                    spec = ModelSpec(
                        100.0, truth["g"], q, TimePerception(s=0.0, a=1.0, b=truth["b"])
                    )
                data = generate_dataset(spec, GEOMETRIC_DELAYS)
                result = fit_model(data, fam, FitConfig(seed=seed, restarts=6))
                for name, true_value in truth.items():
                    worst = max(worst, abs(result.params[name] - true_value) / abs(true_value))
        assert worst <= 5e-3

    def test_insufficient_data(self):
        data = IndifferenceDataset(10.0, [1.0], [5.0])
        with pytest.raises(InsufficientDataError):
            fit_model(data, ModelFamily.EXP_STEVENS, FAST)
        # boundary: points == parameters is still too few
        data3 = IndifferenceDataset(10.0, [1.0, 2.0, 4.0], [9.0, 8.0, 7.0])
        with pytest.raises(InsufficientDataError):
            fit_model(data3, ModelFamily.EXP_STEVENS, FAST)

    def test_deterministic_given_seed(self):
        truth = ModelSpec(50.0, 0.12, 1.0)
        data = generate_dataset(truth, [1.0, 3.0, 9.0, 27.0, 81.0], noise_sigma=1.5, seed=7)
        a = fit_model(data, ModelFamily.Q_GENERALIZED, FitConfig(seed=3))
        b = fit_model(data, ModelFamily.Q_GENERALIZED, FitConfig(seed=3))
        assert a.params == b.params
        assert a.rss == b.rss and a.aic == b.aic and a.n_evals == b.n_evals

    def test_nested_family_dominates_on_noisy_data(self):
        # the deformed family contains hyperbolic as a slice, so its best
        # rss can never be meaningfully worse
        truth = ModelSpec(100.0, 0.15, 1.0)
        for seed in range(10):
            data = generate_dataset(truth, GEOMETRIC_DELAYS, noise_sigma=2.0, seed=seed)
            rss_hyp = fit_model(data, ModelFamily.HYPERBOLIC, FitConfig(seed=seed)).rss
            rss_q = fit_model(data, ModelFamily.Q_GENERALIZED, FitConfig(seed=seed)).rss
            assert rss_q <= rss_hyp + 1e-9

    def test_noisy_k_recovery_rate(self):
        truth = ModelSpec(100.0, 0.1, 1.0)
        hits = 0
        for seed in range(100):
            data = generate_dataset(truth, GEOMETRIC_DELAYS, noise_sigma=2.0, seed=seed)
            result = fit_model(data, ModelFamily.HYPERBOLIC, FitConfig(seed=seed, restarts=4))
            if abs(result.params["k"] - 0.1) / 0.1 <= 0.10:
                hits += 1
        assert hits >= 90

    def test_reported_spec_reproduces_the_rss(self):
        from tempodisc import value_curve

        truth = ModelSpec(100.0, 0.3, 0.0, TimePerception(s=0.6, a=1.0, b=0.2))
        data = generate_dataset(truth, [1.0, 3.0, 9.0, 27.0, 81.0], noise_sigma=3.0, seed=1)
        result = fit_model(data, ModelFamily.UNIFIED, FAST)
        resid = value_curve(result.spec, data.delays) - data.values
        assert float(resid @ resid) == pytest.approx(result.rss, rel=1e-12)


class TestCompareModels:
    def test_ranked_by_aic(self):
        truth = ModelSpec(100.0, 0.2, 1.0)
        data = generate_dataset(truth, GEOMETRIC_DELAYS, noise_sigma=1.0, seed=5)
        ranked = compare_models(
            data,
            [ModelFamily.EXPONENTIAL, ModelFamily.HYPERBOLIC, ModelFamily.EXP_WEBER_FECHNER],
            FAST,
        )
        aics = [r.aic for r in ranked]
        assert aics == sorted(aics)

    def test_noiseless_hyperbolic_wins_big(self):
        truth = ModelSpec(100.0, 0.2, 1.0)
        data = generate_dataset(truth, GEOMETRIC_DELAYS)
        ranked = compare_models(data, [ModelFamily.EXPONENTIAL, ModelFamily.HYPERBOLIC], FAST)
        assert ranked[0].family is ModelFamily.HYPERBOLIC
        assert ranked[1].rss / max(ranked[0].rss, 1e-300) >= 1e6

    def test_generator_family_ranks_first_under_noise(self):
        # short version of the full hundred-seed screen in the acceptance
        # suite: dense log-spaced delays separate the 2-parameter truth
        # from 1-parameter impostors
        delays = np.unique(np.round(np.logspace(0.0, 3.2, 96), 4))
        truth = ModelSpec(100.0, 1.2, 0.0, TimePerception(s=0.0, a=1.0, b=0.05))
        families = [
            ModelFamily.EXPONENTIAL,
            ModelFamily.HYPERBOLIC,
            ModelFamily.EXP_WEBER_FECHNER,
            ModelFamily.EXP_STEVENS,
        ]
        for seed in range(10):
            data = generate_dataset(truth, delays, noise_sigma=2.0, seed=seed)
            ranked = compare_models(
                data, families, FitConfig(seed=seed, restarts=3, max_evals=1500)
            )
            assert ranked[0].family is ModelFamily.EXP_WEBER_FECHNER, seed
            assert ranked[-1].family is ModelFamily.EXPONENTIAL, seed

    def test_order_invariant_under_currency_rescaling(self):
        truth = ModelSpec(100.0, 1.2, 0.0, TimePerception(s=0.0, a=1.0, b=0.05))
        families = [
            ModelFamily.EXPONENTIAL,
            ModelFamily.HYPERBOLIC,
            ModelFamily.EXP_WEBER_FECHNER,
            ModelFamily.EXP_STEVENS,
        ]
        data = generate_dataset(
            truth, [1.0, 2.0, 5.0, 10.0, 30.0, 90.0, 365.0], noise_sigma=2.0, seed=4
        )
        scaled = IndifferenceDataset(data.v0 * 7.5, data.delays, data.values * 7.5)
        order = [r.family for r in compare_models(data, families, FAST)]
        order_scaled = [r.family for r in compare_models(scaled, families, FAST)]
        assert order == order_scaled

    def test_per_family_failure_is_recorded_not_raised(self):
        data = IndifferenceDataset(10.0, [1.0, 2.0], [9.0, 8.0])
        ranked = compare_models(
            data, [ModelFamily.HYPERBOLIC, ModelFamily.EXP_STEVENS], FAST
        )
        assert ranked[0].family is ModelFamily.HYPERBOLIC
        failed = ranked[-1]
        assert failed.family is ModelFamily.EXP_STEVENS
        assert math.isinf(failed.aic)
        assert failed.error is not None
        assert failed.spec is None

    def test_empty_family_list_rejected(self):
        data = IndifferenceDataset(10.0, [1.0, 2.0], [9.0, 8.0])
        with pytest.raises(DomainError):
            compare_models(data, [], FAST)


class TestFitConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            FitConfig(max_evals=5)
        with pytest.raises(DomainError):
            FitConfig(tolerance=0.0)
        with pytest.raises(DomainError):
            FitConfig(seed=-1)
        with pytest.raises(DomainError):
            FitConfig(restarts=0)


def test_result_spec_serializes_for_every_family():
    # each family's reported spec must survive the JSON round trip used
    # by the command-line layer
    truth = ModelSpec(100.0, 0.3, 0.0, TimePerception(s=0.6, a=1.0, b=0.2))
    data = generate_dataset(truth, [1.0, 3.0, 9.0, 27.0, 81.0, 243.0], noise_sigma=3.0, seed=1)
    for fam in ModelFamily:
        result = fit_model(data, fam, FitConfig(seed=1, restarts=4))
        payload = json.dumps(result.spec.to_dict())
        assert ModelSpec.from_dict(json.loads(payload)) == result.spec
