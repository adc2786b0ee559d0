"""Acceptance suite: one test per shipping criterion, at pinned tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion. Criterion labels are stable identifiers used in the
project documentation.
"""
import time

import numpy as np
import pytest

from formsense.appeal import (
    AppealModel,
    FitOptions,
    Observation,
    appeal_gradient,
    fit_appeal_model,
    objective,
    predict_appeal,
    refit_factors,
)
from formsense.cli import main
from formsense.core import SparseDissimilarityMatrix
from formsense.core.types import AppealScores, DesignParams
from formsense.geometry import WALL_GAP, apply_rule, generate_profile, revolve_polyline
from formsense.mds import MdsOptions, PerceptualConfiguration, fit_mds
from formsense.prefmap import f_critical, f_statistic, fit_vector_model
from formsense.surface import response_surface


def note(label: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"{status} criterion {label}: {detail}".rstrip())
    assert ok, f"criterion {label}: {detail}"


def full_matrix(points):
    points = np.asarray(points, dtype=float)
    entries = {}
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            entries[(i + 1, j + 1)] = float(np.linalg.norm(points[i] - points[j]))
    return SparseDissimilarityMatrix(n=len(points), entries=entries)


@pytest.fixture(scope="module")
def fixture_fit(fixture_matrix):
    started = time.perf_counter()
    config = fit_mds(fixture_matrix, MdsOptions(K=2, restarts=20, seed=0))
    elapsed = time.perf_counter() - started
    return config, elapsed


class TestCriterion1MdsReproduction:
    def test_1a_stress_bound(self, fixture_fit):
        config, _ = fixture_fit
        note("1a", config.stress <= 0.15,
             f"stress on bundled dissimilarities = {config.stress:.6f} "
             "(bound 0.15; reference study reported 0.12)")

    def test_1b_runtime(self, fixture_fit):
        _, elapsed = fixture_fit
        note("1b", elapsed < 5.0, f"fit_mds runtime {elapsed:.2f}s < 5s")

    def test_1c_stress_monotone_in_dimension(self, fixture_matrix):
        values = [fit_mds(fixture_matrix, MdsOptions(K=k, restarts=20, seed=0)).stress
                  for k in (1, 2, 3)]
        ok = values[0] >= values[1] >= values[2]
        note("1c", ok, "stress(K=1..3) = " + ", ".join(f"{v:.4f}" for v in values))


class TestCriterion2MdsExactness:
    def test_2_exact_embeddings(self):
        rng = np.random.default_rng(2024)
        planar = fit_mds(full_matrix(rng.uniform(-3, 3, size=(10, 2))),
                         MdsOptions(K=2, restarts=10, seed=0))
        square = fit_mds(full_matrix([[0, 0], [1, 0], [1, 1], [0, 1]]),
                         MdsOptions(K=2, restarts=10, seed=0))
        ok = planar.stress <= 1e-3 and square.stress <= 1e-3
        note("2", ok, f"planar stress {planar.stress:.2e}, "
                      f"unit square stress {square.stress:.2e} (bound 1e-3)")


class TestCriterion3PrefmapExactness:
    def test_3_plane_recovery(self):
        rng = np.random.default_rng(7)
        points = rng.normal(size=(12, 2)) * 0.8
        values = 2 * points[:, 0] - points[:, 1] + 3
        assert np.all((values >= 0) & (values <= 10))  # plane stays on scale
        config = PerceptualConfiguration(points=points, K=2, stress=0.0)
        appeal = AppealScores({i + 1: float(v) for i, v in enumerate(values)})
        fit = fit_vector_model(config, appeal)
        ok = (abs(fit.a - 2) <= 1e-9 and abs(fit.b + 1) <= 1e-9
              and abs(fit.c - 3) <= 1e-9 and abs(fit.r_squared - 1) <= 1e-9)
        note("3", ok, f"recovered (a,b,c)=({fit.a:.12f},{fit.b:.12f},{fit.c:.12f}), "
                      f"R^2={fit.r_squared}")


class TestCriterion4PrefmapPipeline:
    def test_4_significance_and_fit_quality(self, fixture_fit, fixture_appeal):
        config, _ = fixture_fit
        fit = fit_vector_model(config, fixture_appeal)
        computed_f = f_statistic(0.91, 18, 2)
        formula_ok = abs(computed_f - 75.83) <= 0.01
        print(f"note: reference study reported F = 80 for R^2 = 0.91; the "
              f"standard formula gives {computed_f:.2f} (documented deviation)")
        record = (f"(a,b,c)=({fit.a:.3f},{fit.b:.3f},{fit.c:.3f}), "
                  f"R^2={fit.r_squared:.4f}, F={fit.f_statistic:.2f}")
        ok = fit.significant_at[0.01] and fit.r_squared >= 0.75 and formula_ok
        note("4", ok, f"significant at 0.01 via Fisher-Snedecor critical value; {record} "
                      "(reference: R^2=0.91)")


class TestCriterion5FCritical:
    def test_5_critical_values(self):
        value_01 = f_critical(0.01, 2, 15)
        value_05 = f_critical(0.05, 2, 15)
        ok = abs(value_01 - 6.36) <= 0.02 and abs(value_05 - 3.68) <= 0.02
        note("5", ok, f"F crit (0.01; 2,15)={value_01:.4f} (6.36±0.02), "
                      f"(0.05; 2,15)={value_05:.4f} (3.68±0.02)")


class TestCriterion6AppealEvaluation:
    def test_6_reference_predictions(self, reference_model):
        at_g4 = predict_appeal(reference_model, DesignParams(8, 7, 6))
        at_g2 = predict_appeal(reference_model, DesignParams(8, 7, 9.5))
        ok = abs(at_g4 - 10.40) <= 0.01 and abs(at_g2 - 3.31) <= 0.01
        note("6", ok, f"predicted {at_g4:.4f} at (8,7,6) [10.40±0.01], "
                      f"{at_g2:.4f} at (8,7,9.5) [3.31±0.01]")


class TestCriterion7Gradient:
    def test_7_finite_difference_check(self, reference_model):
        rng = np.random.default_rng(77)
        worst = 0.0
        for _ in range(100):
            model = AppealModel(a=rng.normal(0, 2, 10), k=rng.normal(0, 1, 3))
            dims = DesignParams(*rng.uniform(1, 10, 3))
            analytic = np.array(appeal_gradient(model, dims))
            numeric = np.zeros(3)
            h = 1e-5
            for axis, name in enumerate(("d1", "d2", "d3")):
                values = {"d1": dims.d1, "d2": dims.d2, "d3": dims.d3}
                up = dict(values)
                up[name] += h
                down = dict(values)
                down[name] -= h
                numeric[axis] = (predict_appeal(model, DesignParams(**up))
                                 - predict_appeal(model, DesignParams(**down))) / (2 * h)
            scale = np.maximum(np.abs(numeric), 1.0)
            worst = max(worst, float(np.max(np.abs(analytic - numeric) / scale)))
        _, g2, g3 = appeal_gradient(reference_model, DesignParams(8, 5, 8))
        values_ok = abs(g2 - 0.32) <= 0.005 and abs(g3 + 2.11) <= 0.005
        ok = worst <= 1e-6 and values_ok
        note("7", ok, f"max relative gradient error {worst:.2e} over 100 cases; "
                      f"reference gradient (d2,d3)=({g2:.4f},{g3:.4f})")


class TestCriterion8SurfaceReduction:
    def test_8_identity_and_coefficients(self, reference_model):
        surf = response_surface(reference_model, 8.0)
        rng = np.random.default_rng(8)
        worst = 0.0
        for d2, d3 in rng.uniform(0.5, 12.0, size=(1000, 2)):
            worst = max(worst, abs(float(surf(d2, d3))
                                   - predict_appeal(reference_model, DesignParams(8, d2, d3))))
        coeff_ok = (abs(surf.c0 - 13.88) <= 0.01 and abs(surf.c_d2 - 0.04) <= 0.005
                    and abs(surf.c_d3 + 0.08) <= 0.005)
        ok = worst <= 1e-9 and coeff_ok
        note("8", ok, f"max reduction error {worst:.2e} over 1000 points; "
                      f"c0={surf.c0:.4f}, c_d2={surf.c_d2:.4f}, c_d3={surf.c_d3:.4f}")


class TestCriterion9FitDominance:
    def test_9_beats_reference_coefficients(self, observations, reference_model):
        started = time.perf_counter()
        _, diagnostics = fit_appeal_model(observations, FitOptions(starts=50, seed=0))
        elapsed = time.perf_counter() - started
        baseline = objective(refit_factors(reference_model.a, observations), observations)
        ok = diagnostics.objective <= baseline and elapsed < 30.0
        note("9", ok, f"fitted objective {diagnostics.objective:.4f} <= "
                      f"reference-coefficient objective {baseline:.4f} "
                      f"(factors refit); runtime {elapsed:.1f}s < 30s")


class TestCriterion10SignPattern:
    def test_10_gradient_signs_match_codes(self, observations):
        model, _ = fit_appeal_model(observations, FitOptions(starts=50, seed=0))
        grads = np.array([appeal_gradient(model, o.dims) for o in observations])
        share_d3 = float(np.mean(grads[:, 2] <= 1e-9))
        share_d2 = float(np.mean(grads[:, 1] >= -1e-9))
        ok = share_d3 >= 0.85 and share_d2 >= 0.70
        note("10", ok, f"dP/dd3 <= 0 at {share_d3:.0%} (need 85%), "
                       f"dP/dd2 >= 0 at {share_d2:.0%} (need 70%)")


class TestCriterion11SyntheticRecovery:
    def test_11_ground_truth_recovered(self):
        rng = np.random.default_rng(11)
        truth = AppealModel(a=rng.normal(0, 1, 10), k=np.array([0.8, 2.5, -1.2]))
        observations = []
        for d1 in (4.0, 6.0, 8.0):
            for d2 in (2.0, 4.0, 6.0):
                for d3 in (3.0, 5.0, 7.0):
                    dims = DesignParams(d1, d2, d3)
                    grads = np.array(appeal_gradient(truth, dims))
                    observations.append(Observation(
                        dims=dims, appeal=predict_appeal(truth, dims),
                        deltas=tuple(truth.k * grads)))
        model, diagnostics = fit_appeal_model(observations, FitOptions(starts=10, seed=0))
        prediction_error = max(
            abs(predict_appeal(model, o.dims) - predict_appeal(truth, o.dims))
            for o in observations)
        ok = diagnostics.objective <= 1e-6 and prediction_error <= 1e-3
        note("11", ok, f"objective {diagnostics.objective:.2e} (bound 1e-6), "
                       f"max prediction error {prediction_error:.2e} (bound 1e-3)")


class TestCriterion12Geometry:
    def test_12_volume_gap_and_rules(self, template):
        mesh = revolve_polyline(np.array([[0, 0], [1, 0], [1, 2], [0, 2.0]]), 256)
        expected = float(np.pi * 2.0)
        volume_ok = abs(mesh.volume() - expected) / expected <= 0.002

        shape = generate_profile(template, DesignParams(8, 5, 8))
        container = shape.container_points
        samples = np.linspace(1, len(shape.inner) - 2, 50).astype(int)
        gaps = []
        for point in shape.inner[samples]:
            best = np.inf
            for a, b in zip(container[:-1], container[1:]):
                ab = b - a
                t = np.clip(np.dot(point - a, ab) / np.dot(ab, ab), 0, 1)
                best = min(best, float(np.linalg.norm(point - (a + t * ab))))
            gaps.append(best)
        gap_ok = all(abs(g - WALL_GAP) <= 1e-3 for g in gaps)

        rules_ok = (
            apply_rule(DesignParams(8, 5, 7), "R2", 0.5) == DesignParams(8, 5.5, 7)
            and apply_rule(DesignParams(8, 5, 7), "R1", 1.0) == DesignParams(9, 5, 7)
            and apply_rule(DesignParams(8, 5, 7), "R3", 0.5) == DesignParams(8, 5, 7.5)
        )
        ok = volume_ok and gap_ok and rules_ok
        note("12", ok, f"cylinder volume {mesh.volume():.5f} vs {expected:.5f} "
                       f"(0.2%), wall gap within 1e-3 at 50 samples, rule cases exact")


class TestCriterion13PipelineDeterminism:
    def test_13_byte_identical_reruns(self, tmp_path):
        started = time.perf_counter()
        first = tmp_path / "first"
        second = tmp_path / "second"
        assert main(["report", "--out-dir", str(first), "--seed", "0"]) == 0
        assert main(["report", "--out-dir", str(second), "--seed", "0"]) == 0
        elapsed = time.perf_counter() - started
        mismatched = [
            path.name for path in sorted(first.iterdir())
            if path.read_bytes() != (second / path.name).read_bytes()
        ]
        ok = not mismatched and elapsed < 60.0
        note("13", ok, f"two seeded runs byte-identical across "
                       f"{len(list(first.iterdir()))} artifacts; total {elapsed:.1f}s < 60s")
