from pathlib import Path

import numpy as np
import pytest

from formsense.appeal import AppealModel, predict_appeal
from formsense.core.types import DesignParams
from formsense.figures import surface_colormap_svg
from formsense.surface import (
    iso_appeal_lines,
    response_surface,
    surface_grid,
)

GOLDEN = Path(__file__).parent / "golden"


def plane_surface(c_d2, c_d3, c0=0.0):
    a = np.zeros(10)
    a[1], a[2], a[9] = c_d2, c_d3, c0
    return response_surface(AppealModel(a=a, k=np.zeros(3)), 8.0)


class TestResponseSurface:
    def test_reference_coefficients(self, reference_model):
        surf = response_surface(reference_model, 8.0)
        assert surf.c0 == pytest.approx(13.88, abs=0.01)
        assert surf.c_d2 == pytest.approx(0.04, abs=0.005)
        assert surf.c_d3 == pytest.approx(-0.08, abs=0.005)

    def test_quadratic_terms_pass_through(self, reference_model):
        surf = response_surface(reference_model, 8.0)
        assert surf.c_d2sq == 0.02
        assert surf.c_d3sq == -0.13
        assert surf.c_d2d3 == 0.01

    def test_agrees_with_full_model_at_fixed_d1(self, reference_model):
        surf = response_surface(reference_model, 8.0)
        rng = np.random.default_rng(4)
        for d2, d3 in rng.uniform(0.5, 12.0, size=(1000, 2)):
            full = predict_appeal(reference_model, DesignParams(8.0, d2, d3))
            assert surf(d2, d3) == pytest.approx(full, abs=1e-9)

    def test_gradient_matches_differences(self, reference_model):
        surf = response_surface(reference_model, 8.0)
        h = 1e-6
        for d2, d3 in ((3.0, 6.0), (5.0, 8.0), (7.0, 9.5)):
            g2, g3 = surf.gradient(d2, d3)
            assert g2 == pytest.approx((surf(d2 + h, d3) - surf(d2 - h, d3)) / (2 * h), abs=1e-5)
            assert g3 == pytest.approx((surf(d2, d3 + h) - surf(d2, d3 - h)) / (2 * h), abs=1e-5)

    def test_positive_d1_required(self, reference_model):
        with pytest.raises(ValueError):
            response_surface(reference_model, 0.0)


class TestSurfaceGrid:
    def test_single_cell_equals_prediction(self, reference_model):
        surf = response_surface(reference_model, 8.0)
        grid = surface_grid(surf, (5.0, 5.0), (8.0, 8.0), 1)
        assert grid.values.shape == (1, 1)
        assert grid.values[0, 0] == pytest.approx(
            predict_appeal(reference_model, DesignParams(8, 5, 8)), abs=1e-12)

    def test_monotone_where_gradient_is(self, reference_model):
        # over the design region the reference surface rises with d2 and
        # falls with d3 (checked against its gradient signs)
        surf = response_surface(reference_model, 8.0)
        grid = surface_grid(surf, (3.0, 7.0), (6.0, 9.5), 40)
        gd2, gd3 = np.meshgrid(grid.d2_values, grid.d3_values)
        g2, g3 = surf.gradient(gd2, gd3)
        assert np.all(g2 > 0) and np.all(g3 < 0)
        assert np.all(np.diff(grid.values, axis=1) > 0)
        assert np.all(np.diff(grid.values, axis=0) < 0)

    def test_colormap_golden_byte_stable(self, reference_model):
        surf = response_surface(reference_model, 8.0)
        grid = surface_grid(surf, (3.0, 7.0), (6.0, 9.5), 50)
        rendered = surface_colormap_svg(grid)
        golden = (GOLDEN / "surface_colormap_reference.svg").read_text()
        assert rendered == golden

    def test_empty_range_rejected(self, reference_model):
        surf = response_surface(reference_model, 8.0)
        with pytest.raises(ValueError):
            surface_grid(surf, (7.0, 3.0), (6.0, 9.5), 10)


class TestIsoLines:
    def test_planar_surface_slope_exact(self):
        surf = plane_surface(1.0, -2.0)
        analysis = iso_appeal_lines(surf, [0.0, -3.0], ((0.0, 10.0), (0.0, 4.0)), 80)
        for line in analysis.lines:
            assert not line.empty
            for fit in line.line_fits:
                assert fit["slope"] == pytest.approx(0.5, abs=1e-9)
                assert fit["rms"] <= 1e-9

    def test_level_above_range_is_empty(self, reference_model):
        surf = response_surface(reference_model, 8.0)
        analysis = iso_appeal_lines(surf, [999.0], ((3.0, 7.0), (6.0, 9.5)), 30)
        assert analysis.lines[0].empty
        assert analysis.lines[0].polylines == ()

    def test_levels_lie_on_surface(self, reference_model):
        surf = response_surface(reference_model, 8.0)
        analysis = iso_appeal_lines(surf, [5.0, 8.0], ((3.0, 7.0), (6.0, 9.5)), 200)
        for line in analysis.lines:
            assert not line.empty
            for polyline in line.polylines:
                values = surf(polyline[:, 0], polyline[:, 1])
                assert np.max(np.abs(values - line.level)) <= 5e-3

    def test_gradient_field_shape(self, reference_model):
        surf = response_surface(reference_model, 8.0)
        analysis = iso_appeal_lines(surf, [5.0], ((3.0, 7.0), (6.0, 9.5)), 25)
        assert analysis.gradient_d2.shape == (25, 25)
        assert analysis.gradient_d3.shape == (25, 25)

    def test_reference_slope_field_reported_not_asserted(self, reference_model):
        # the published iso-line slope claim is evaluated as a diagnostic;
        # the fitted-gradient ratio at (d2,d3)=(5,8) is what the data gives
        surf = response_surface(reference_model, 8.0)
        g2, g3 = surf.gradient(5.0, 8.0)
        assert g2 == pytest.approx(0.32, abs=0.005)
        assert g3 == pytest.approx(-2.11, abs=0.005)
        analysis = iso_appeal_lines(surf, [7.0], ((3.0, 7.0), (6.0, 9.5)), 120)
        slopes = [fit["slope"] for line in analysis.lines
                  for fit in line.line_fits if not fit["vertical"]]
        assert slopes  # recorded for the report; no numeric claim
