"""External preference mapping with the vector model.

Regresses the hedonic appeal P on the two perceptual axes,

    P = a * axe1 + b * axe2 + c

tests overall significance against the Fisher-Snedecor distribution, and
derives the appeal-vector rendering data: the fitted plane's gradient
(a, b) is the direction of steepest increasing appeal, and its
perpendiculars are the iso-appeal lines.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaincinv

from .core.types import AppealScores
from .errors import RankDeficientError, ZeroVectorError
from .mds import PerceptualConfiguration

DEFAULT_P_LEVELS = (0.01, 0.05)


@dataclass(frozen=True)
class VectorModelFit:
    a: float
    b: float
    c: float
    r_squared: float
    f_statistic: float
    dof: tuple[int, int]
    significant_at: dict[float, bool]

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "r_squared": self.r_squared,
            # strict JSON: an exact fit has infinite F, emitted as null
            "f_statistic": self.f_statistic if math.isfinite(self.f_statistic) else None,
            "dof": list(self.dof),
            "significant_at": {str(k): v for k, v in sorted(self.significant_at.items())},
        }


@dataclass(frozen=True)
class AppealVectorPlot:
    """Rendering data for the appeal vector in the perceptual plane.

    The direction is the unit gradient of the fitted plane, so fitted
    appeal increases along it at ``gradient_norm`` per unit step;
    iso-appeal lines run perpendicular.
    """

    origin: tuple[float, float]
    direction: tuple[float, float]
    gradient_norm: float
    iso_directions: tuple[float, float]

    def iso_lines(self, span: float, count: int = 7) -> list[tuple[tuple[float, float], tuple[float, float]]]:
        """Family of iso-appeal lines as (center, direction) pairs,
        evenly spaced along the appeal direction across ``span``."""
        ux, uy = self.direction
        centers = [span * (k / (count - 1) - 0.5) if count > 1 else 0.0
                   for k in range(count)]
        return [((offset * ux, offset * uy), self.iso_directions)
                for offset in centers]


def f_statistic(r_squared: float, n: int, p: int) -> float:
    """Overall-regression F for a model with p slopes fitted to n points.

    F = (R^2 / p) / ((1 - R^2) / (n - p - 1)); returns +inf for R^2 = 1.
    """
    if not 0 <= r_squared <= 1:
        raise ValueError(f"r_squared must be in [0,1], got {r_squared}")
    if n <= p + 1:
        raise ValueError(f"need n > p + 1, got n={n}, p={p}")
    if r_squared == 1.0:
        return math.inf
    return (r_squared / p) / ((1.0 - r_squared) / (n - p - 1))


def f_critical(p_level: float, dof_num: int, dof_den: int) -> float:
    """Upper critical value of the F distribution.

    Inverts the F cumulative through the regularized incomplete beta
    function: F(x) has CDF I_z(d1/2, d2/2) with z = d1 x / (d1 x + d2).
    """
    if not 0 < p_level < 1:
        raise ValueError(f"p_level must be in (0,1), got {p_level}")
    if dof_num < 1 or dof_den < 1:
        raise ValueError("degrees of freedom must be >= 1")
    z = betaincinv(dof_num / 2.0, dof_den / 2.0, 1.0 - p_level)
    return float(dof_den * z / (dof_num * (1.0 - z)))


def fit_vector_model(config: PerceptualConfiguration, appeal: AppealScores,
                     p_levels=DEFAULT_P_LEVELS) -> VectorModelFit:
    """Ordinary least squares of appeal on the two perceptual axes.

    Constant appeal degenerates cleanly to a zero-slope fit with R^2 = 0;
    a collinear configuration raises RankDeficientError.
    """
    if config.K != 2:
        raise ValueError(f"vector model needs K=2 axes, got K={config.K}")
    n = config.n
    if n < 4:
        raise ValueError(f"need at least 4 products, got {n}")
    appeal.require_complete(n)
    y = np.array([appeal[pid] for pid in config.product_ids], dtype=float)
    design = np.column_stack([config.points, np.ones(n)])
    dof = (2, n - 3)

    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return VectorModelFit(
            a=0.0, b=0.0, c=float(y.mean()), r_squared=0.0, f_statistic=0.0,
            dof=dof, significant_at={lvl: False for lvl in p_levels},
        )

    if np.linalg.matrix_rank(design) < 3:
        raise RankDeficientError("perceptual points are collinear")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    residuals = y - design @ coef
    r_squared = 1.0 - float(np.sum(residuals**2)) / ss_tot
    r_squared = min(max(r_squared, 0.0), 1.0)
    f_value = f_statistic(r_squared, n, 2)
    significant = {
        lvl: bool(f_value > f_critical(lvl, *dof)) for lvl in p_levels
    }
    return VectorModelFit(
        a=float(coef[0]), b=float(coef[1]), c=float(coef[2]),
        r_squared=r_squared, f_statistic=f_value, dof=dof,
        significant_at=significant,
    )


def appeal_vector(fit: VectorModelFit) -> AppealVectorPlot:
    """Unit direction of increasing fitted appeal plus iso-line direction.

    Moving one unit along the direction raises the fitted appeal by the
    gradient norm; iso-appeal lines run perpendicular to it.
    """
    norm = math.hypot(fit.a, fit.b)
    if norm == 0.0:
        raise ZeroVectorError("appeal gradient is (0,0); no direction")
    direction = (fit.a / norm, fit.b / norm)
    return AppealVectorPlot(
        origin=(0.0, 0.0),
        direction=direction,
        gradient_norm=norm,
        iso_directions=(-direction[1], direction[0]),
    )
