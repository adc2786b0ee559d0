import numpy as np
import pytest

from formsense.appeal import (
    ANALYTIC,
    AS_PRINTED,
    AppealModel,
    FitOptions,
    Observation,
    appeal_gradient,
    fit_appeal_model,
    gradient_rows,
    identifiability_report,
    objective,
    objective_terms,
    predict_appeal,
    quad_features,
    refit_factors,
)
from formsense.core.types import DesignParams
from formsense.errors import InsufficientVariationError


def random_model(rng):
    return AppealModel(a=rng.normal(0, 2, 10), k=rng.normal(0, 3, 3))


def finite_difference_gradient(model, dims, h=1e-5):
    out = []
    for axis in ("d1", "d2", "d3"):
        hi = predict_appeal(model, _bump(dims, axis, +h))
        lo = predict_appeal(model, _bump(dims, axis, -h))
        out.append((hi - lo) / (2 * h))
    return np.array(out)


def _bump(dims, axis, amount):
    values = {"d1": dims.d1, "d2": dims.d2, "d3": dims.d3}
    values[axis] += amount
    return DesignParams(**values)


class TestPredict:
    def test_reference_coefficients_at_g4(self, reference_model):
        assert predict_appeal(reference_model, DesignParams(8, 7, 6)) == pytest.approx(10.40, abs=0.01)

    def test_reference_coefficients_at_g2(self, reference_model):
        assert predict_appeal(reference_model, DesignParams(8, 7, 9.5)) == pytest.approx(3.31, abs=0.01)

    def test_intercept_only(self):
        model = AppealModel(a=np.array([0.0] * 9 + [5.0]), k=np.zeros(3))
        for dims in (DesignParams(1, 1, 1), DesignParams(8, 5, 7), DesignParams(2, 9, 4)):
            assert predict_appeal(model, dims) == 5.0


class TestGradient:
    def test_reference_coefficients_at_855(self, reference_model):
        _, g2, g3 = appeal_gradient(reference_model, DesignParams(8, 5, 8))
        assert g2 == pytest.approx(0.32, abs=0.005)
        assert g3 == pytest.approx(-2.11, abs=0.005)

    def test_zero_model(self):
        model = AppealModel(a=np.zeros(10), k=np.zeros(3))
        assert appeal_gradient(model, DesignParams(3, 4, 5)) == (0.0, 0.0, 0.0)

    def test_matches_central_differences(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            model = random_model(rng)
            dims = DesignParams(*rng.uniform(1.0, 10.0, 3))
            analytic = np.array(appeal_gradient(model, dims))
            numeric = finite_difference_gradient(model, dims)
            scale = np.maximum(np.abs(numeric), 1.0)
            assert np.all(np.abs(analytic - numeric) / scale <= 1e-6)

    def test_printed_variant_differs_on_cross_terms(self, reference_model):
        dims = DesignParams(8, 5, 8)
        exact = np.array(appeal_gradient(reference_model, dims))
        printed = np.array(appeal_gradient(reference_model, dims, kind=AS_PRINTED))
        assert not np.allclose(exact, printed)
        # pure-quadratic models without cross terms agree in both variants
        no_cross = AppealModel(a=np.array([1, 2, 3, 4, 5, 6, 0, 0, 0, 7.0]), k=np.zeros(3))
        assert np.allclose(appeal_gradient(no_cross, dims),
                           appeal_gradient(no_cross, dims, kind=AS_PRINTED))

    def test_gradient_rows_match_feature_derivative(self):
        dims = DesignParams(2.0, 3.0, 4.0)
        rows = gradient_rows(dims)
        h = 1e-7
        for axis_index, axis in enumerate(("d1", "d2", "d3")):
            numeric = (quad_features(_bump(dims, axis, h)) - quad_features(dims)) / h
            assert np.allclose(rows[axis_index], numeric, atol=1e-5)


class TestObjective:
    def test_perfect_model_is_zero(self):
        rng = np.random.default_rng(5)
        truth = random_model(rng)
        observations = []
        for _ in range(12):
            dims = DesignParams(*rng.uniform(2, 9, 3))
            grads = np.array(appeal_gradient(truth, dims))
            observations.append(Observation(
                dims=dims, appeal=predict_appeal(truth, dims),
                deltas=tuple(truth.k * grads)))
        assert objective(truth, observations) == pytest.approx(0.0, abs=1e-16)

    def test_hand_evaluated_single_observation(self):
        model = AppealModel(a=np.array([0.0] * 9 + [4.0]), k=np.zeros(3))
        observation = Observation(dims=DesignParams(1, 1, 1), appeal=4.0, deltas=(1, 0, -1))
        # appeal term 0; derivative residuals are the raw codes
        assert objective(model, [observation]) == pytest.approx(2.0, abs=1e-12)

    def test_reference_appeal_residual_at_g4(self, reference_model, observations):
        appeal_term, _ = objective_terms(reference_model, [observations[3]])
        assert appeal_term == pytest.approx((10 - 10.40) ** 2, abs=0.01)

    def test_decomposition(self, reference_model, observations):
        appeal_term, derivative_term = objective_terms(reference_model, observations)
        assert objective(reference_model, observations) == pytest.approx(
            appeal_term + derivative_term, abs=1e-12)

    def test_reference_objective_recorded(self, reference_model, observations):
        # frozen once from this very evaluation: term-by-term over the
        # bundled tables with the published coefficients
        value = objective(reference_model, observations)
        assert np.isfinite(value)
        assert value == pytest.approx(400.2067, abs=0.01)


class TestFit:
    def test_synthetic_recovery(self):
        rng = np.random.default_rng(33)
        truth = AppealModel(a=rng.normal(0, 1, 10), k=np.array([0.5, 2.0, -1.0]))
        observations = []
        for d1 in (4.0, 6.0, 8.0):
            for d2 in (2.0, 4.0, 6.0):
                for d3 in (3.0, 5.0, 7.0):
                    dims = DesignParams(d1, d2, d3)
                    grads = np.array(appeal_gradient(truth, dims))
                    observations.append(Observation(
                        dims=dims, appeal=predict_appeal(truth, dims),
                        deltas=tuple(truth.k * grads)))
        model, diagnostics = fit_appeal_model(observations, FitOptions(starts=8, seed=0))
        assert diagnostics.objective <= 1e-6
        for obs in observations:
            assert predict_appeal(model, obs.dims) == pytest.approx(
                predict_appeal(truth, obs.dims), abs=1e-3)

    def test_fit_dominates_reference_coefficients(self, observations, reference_model):
        model, diagnostics = fit_appeal_model(observations, FitOptions(starts=50, seed=0))
        baseline = refit_factors(reference_model.a, observations)
        assert diagnostics.objective <= objective(baseline, observations)

    def test_constant_appeal_zero_deltas(self):
        observations = [
            Observation(dims=DesignParams(*dims), appeal=5.0, deltas=(0, 0, 0))
            for dims in ((2, 3, 4), (5, 3, 4), (2, 6, 4), (2, 3, 8), (5, 6, 8))
        ]
        model, diagnostics = fit_appeal_model(observations, FitOptions(starts=5, seed=0))
        assert diagnostics.objective == pytest.approx(0.0, abs=1e-9)
        grads = np.array([appeal_gradient(model, o.dims) for o in observations])
        assert np.allclose(model.k[None, :] * grads, 0.0, atol=1e-6)

    def test_sign_pattern_on_fixture(self, observations):
        model, _ = fit_appeal_model(observations, FitOptions(starts=50, seed=0))
        grads = np.array([appeal_gradient(model, o.dims) for o in observations])
        share_d3_nonpositive = np.mean(grads[:, 2] <= 1e-9)
        share_d2_nonnegative = np.mean(grads[:, 1] >= -1e-9)
        assert share_d3_nonpositive >= 0.85
        assert share_d2_nonnegative >= 0.70

    def test_local_optimality(self, observations):
        model, diagnostics = fit_appeal_model(observations, FitOptions(starts=50, seed=0))
        base = diagnostics.objective
        x = np.concatenate([model.a, model.k])
        # numerical gradient of the objective, scaled
        h = 1e-6
        gradient = np.zeros(13)
        for index in range(13):
            up, down = x.copy(), x.copy()
            up[index] += h
            down[index] -= h
            gradient[index] = (
                objective(AppealModel(a=up[:10], k=up[10:]), observations)
                - objective(AppealModel(a=down[:10], k=down[10:]), observations)
            ) / (2 * h)
        assert np.linalg.norm(gradient) / max(base, 1.0) <= 1e-4
        for index in range(13):
            for sign in (-1.0, 1.0):
                probe = x.copy()
                probe[index] += sign * 1e-3
                value = objective(AppealModel(a=probe[:10], k=probe[10:]), observations)
                assert value >= base - 1e-9

    def test_deterministic_under_seed(self, observations):
        first, _ = fit_appeal_model(observations, FitOptions(starts=12, seed=7))
        second, _ = fit_appeal_model(observations, FitOptions(starts=12, seed=7))
        assert np.array_equal(first.a, second.a)
        assert np.array_equal(first.k, second.k)

    def test_k_nonneg_constraint(self, observations):
        model, _ = fit_appeal_model(observations, FitOptions(starts=20, seed=0, k_nonneg=True))
        assert np.all(model.k >= 0)

    def test_unregularized_constant_column_rejected(self, observations):
        # all products share d1 = 8, so the unregularized appeal design is singular
        with pytest.raises(InsufficientVariationError):
            fit_appeal_model(observations, FitOptions(starts=2, seed=0, ridge=0.0))

    def test_identifiability_groups_on_fixture(self, observations):
        report = identifiability_report(observations)
        assert ("d1", "d1^2", "1") in report.collinear_groups
        assert ("d2", "d1*d2") in report.collinear_groups
        assert ("d3", "d1*d3") in report.collinear_groups

    def test_as_printed_fit_runs(self, observations):
        model, diagnostics = fit_appeal_model(
            observations, FitOptions(starts=10, seed=0, gradient_kind=AS_PRINTED))
        assert np.isfinite(diagnostics.objective)

    def test_needs_distinct_dims(self):
        observations = [
            Observation(dims=DesignParams(2, 3, 4), appeal=5.0, deltas=(0, 0, 0)),
            Observation(dims=DesignParams(2, 3, 4), appeal=6.0, deltas=(0, 0, 0)),
        ]
        with pytest.raises(ValueError):
            fit_appeal_model(observations, FitOptions(starts=2, seed=0))
