"""Derivative-augmented quadratic appeal model.

The predicted appeal over the design parameters (d1, d2, d3) is the full
quadratic

    P(d) = a1*d1 + a2*d2 + a3*d3 + a4*d1^2 + a5*d2^2 + a6*d3^2
         + a7*d1*d2 + a8*d1*d3 + a9*d2*d3 + a10

and the subject's coded derivative judgments (-1/0/+1 per rule) are tied
to the model's partial derivatives through per-rule proportionality
factors k1..k3. Fitting minimizes

    F(a, k) = sum_i (P_i - Phat_i)^2
            + sum_i sum_j (Delta_ij - k_j * dPhat_i/dd_j)^2

which is bilinear in (a, k): alternation solves each half in closed form,
wrapped in seeded multi-starts, with a final nonlinear least-squares
polish of the exact objective.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .core.types import DesignParams, RULES
from .errors import InsufficientVariationError

FEATURE_NAMES = ("d1", "d2", "d3", "d1^2", "d2^2", "d3^2",
                 "d1*d2", "d1*d3", "d2*d3", "1")

ANALYTIC = "analytic"
AS_PRINTED = "as-printed"


@dataclass(frozen=True)
class AppealModel:
    """Quadratic coefficients a1..a10 (a10 is the intercept) plus the
    derivative proportionality factors k1..k3."""

    a: np.ndarray
    k: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        k = np.asarray(self.k, dtype=float)
        if a.shape != (10,):
            raise ValueError(f"a must have 10 coefficients, got {a.shape}")
        if k.shape != (3,):
            raise ValueError(f"k must have 3 factors, got {k.shape}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(k))):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "k", k)

    def to_dict(self) -> dict:
        return {"a": [float(v) for v in self.a], "k": [float(v) for v in self.k]}

    @classmethod
    def from_dict(cls, data: dict) -> "AppealModel":
        return cls(a=np.array(data["a"], dtype=float), k=np.array(data["k"], dtype=float))


@dataclass(frozen=True)
class Observation:
    """One product's data: dimensions, hedonic score, per-rule codes.

    Subject codes are -1/0/+1; synthetic data may carry real-valued
    derivative targets instead.
    """

    dims: DesignParams
    appeal: float
    deltas: tuple[float, float, float]

    def __post_init__(self):
        if len(self.deltas) != 3:
            raise ValueError("need one delta per rule")


def quad_features(dims: DesignParams) -> np.ndarray:
    d1, d2, d3 = dims.as_tuple()
    return np.array([d1, d2, d3, d1 * d1, d2 * d2, d3 * d3,
                     d1 * d2, d1 * d3, d2 * d3, 1.0])


def gradient_rows(dims: DesignParams, kind: str = ANALYTIC) -> np.ndarray:
    """Rows G such that G @ a gives (dP/dd1, dP/dd2, dP/dd3).

    ``analytic`` is the exact gradient of the quadratic. ``as-printed``
    reproduces a historical variant that multiplies the cross terms by
    the differentiation variable; it is kept for comparison runs only.
    """
    d1, d2, d3 = dims.as_tuple()
    if kind == ANALYTIC:
        return np.array([
            [1, 0, 0, 2 * d1, 0, 0, d2, d3, 0, 0],
            [0, 1, 0, 0, 2 * d2, 0, d1, 0, d3, 0],
            [0, 0, 1, 0, 0, 2 * d3, 0, d1, d2, 0],
        ], dtype=float)
    if kind == AS_PRINTED:
        return np.array([
            [1, 0, 0, 2 * d1, 0, 0, d2 * d1, d3 * d1, 0, 0],
            [0, 1, 0, 0, 2 * d2, 0, d1 * d2, 0, d3 * d2, 0],
            [0, 0, 1, 0, 0, 2 * d3, 0, d1 * d3, d2 * d3, 0],
        ], dtype=float)
    raise ValueError(f"unknown gradient kind {kind!r}")


def predict_appeal(model: AppealModel, dims: DesignParams) -> float:
    return float(quad_features(dims) @ model.a)


def appeal_gradient(model: AppealModel, dims: DesignParams,
                    kind: str = ANALYTIC) -> tuple[float, float, float]:
    return tuple(float(v) for v in gradient_rows(dims, kind) @ model.a)


def _stack(observations, kind):
    phi = np.array([quad_features(o.dims) for o in observations])
    grads = np.array([gradient_rows(o.dims, kind) for o in observations])
    appeal = np.array([o.appeal for o in observations], dtype=float)
    deltas = np.array([o.deltas for o in observations], dtype=float)
    return phi, grads, appeal, deltas


def objective(model: AppealModel, observations: list[Observation],
              kind: str = ANALYTIC) -> float:
    """The combined fit criterion: appeal residuals plus derivative
    residuals."""
    appeal_term, derivative_term = objective_terms(model, observations, kind)
    return appeal_term + derivative_term


def objective_terms(model: AppealModel, observations: list[Observation],
                    kind: str = ANALYTIC) -> tuple[float, float]:
    if not observations:
        raise ValueError("need at least one observation")
    phi, grads, appeal, deltas = _stack(observations, kind)
    predicted = phi @ model.a
    slopes = grads @ model.a
    appeal_term = float(np.sum((appeal - predicted) ** 2))
    derivative_term = float(np.sum((deltas - model.k[None, :] * slopes) ** 2))
    return appeal_term, derivative_term


@dataclass(frozen=True)
class FitOptions:
    starts: int = 50
    seed: int = 0
    max_alternations: int = 300
    tolerance: float = 1e-12
    ridge: float = 1e-6
    k_nonneg: bool = False
    polish: bool = True
    gradient_kind: str = ANALYTIC


@dataclass(frozen=True)
class FitDiagnostics:
    objective: float
    appeal_term: float
    derivative_term: float
    appeal_residuals: np.ndarray
    delta_residuals: np.ndarray
    starts_used: int
    best_start: int
    alternations: int
    polished: bool
    identifiability: "IdentifiabilityReport"

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "appeal_term": self.appeal_term,
            "derivative_term": self.derivative_term,
            "appeal_residuals": [float(v) for v in self.appeal_residuals],
            "delta_residuals": [[float(v) for v in row] for row in self.delta_residuals],
            "starts_used": self.starts_used,
            "best_start": self.best_start,
            "alternations": self.alternations,
            "polished": self.polished,
            "identifiability": self.identifiability.to_dict(),
        }


@dataclass(frozen=True)
class IdentifiabilityReport:
    """Near-collinear feature groups of the appeal design matrix.

    On data where a dimension never varies, the appeal term alone cannot
    separate the features in each group; only the derivative residuals
    (and the ridge) pin them down.
    """

    condition_number: float
    collinear_groups: tuple[tuple[str, ...], ...] = field(default=())

    def to_dict(self) -> dict:
        finite = np.isfinite(self.condition_number)
        return {
            # strict JSON: a singular design reports a null condition number
            "condition_number": self.condition_number if finite else None,
            "collinear_groups": [list(g) for g in self.collinear_groups],
        }


def identifiability_report(observations, tol: float = 1e-8) -> IdentifiabilityReport:
    """Group features that the appeal design cannot tell apart.

    Features are linked when they both load on the same null direction of
    the design matrix; connected components of that relation form the
    reported groups.
    """
    phi = np.array([quad_features(o.dims) for o in observations])
    _, singular_values, vt = np.linalg.svd(phi, full_matrices=True)
    padded = np.zeros(10)
    padded[: len(singular_values)] = singular_values
    smax = padded[0]
    smin = padded[-1]
    condition = float(smax / smin) if smin > tol * smax else float("inf")
    null_basis = vt[padded <= tol * smax]
    if len(null_basis) == 0:
        return IdentifiabilityReport(condition_number=condition)
    projector = np.abs(null_basis.T @ null_basis)
    involved = np.nonzero(np.diag(projector) > tol)[0]
    linked = projector > tol
    groups, seen = [], set()
    for col in involved:
        if col in seen:
            continue
        component, frontier = set(), {col}
        while frontier:
            cur = frontier.pop()
            component.add(cur)
            seen.add(cur)
            frontier.update(
                other for other in involved
                if other not in seen and linked[cur, other]
            )
        groups.append(tuple(FEATURE_NAMES[c] for c in sorted(component)))
    return IdentifiabilityReport(condition_number=condition,
                                 collinear_groups=tuple(sorted(groups)))


def _k_step(grads_a, deltas, k_nonneg):
    k = np.zeros(3)
    for j in range(3):
        denom = float(grads_a[:, j] @ grads_a[:, j])
        k[j] = float(deltas[:, j] @ grads_a[:, j]) / denom if denom > 0 else 0.0
    if k_nonneg:
        k = np.maximum(k, 0.0)
    return k


def _a_step(phi, grads, appeal, deltas, k, ridge):
    blocks = [phi] + [k[j] * grads[:, j, :] for j in range(3)]
    targets = [appeal] + [deltas[:, j] for j in range(3)]
    if ridge > 0:
        blocks.append(np.sqrt(ridge) * np.eye(10))
        targets.append(np.zeros(10))
    design = np.vstack(blocks)
    rhs = np.concatenate(targets)
    coef, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    return coef


def fit_appeal_model(observations: list[Observation],
                     options: FitOptions = FitOptions()) -> tuple[AppealModel, FitDiagnostics]:
    """Fit (a1..a10, k1..k3) by seeded multi-start alternation.

    Each start alternates closed-form half-steps (a by ridge least
    squares at fixed k, each k_j by scalar least squares at fixed a)
    until the objective stagnates; the best start is then polished with
    a trust-region nonlinear least-squares pass on the exact objective.
    Deterministic for a fixed seed.
    """
    if len({o.dims.as_tuple() for o in observations}) < 2:
        raise ValueError("need at least 2 distinct design points")
    phi, grads, appeal, deltas = _stack(observations, options.gradient_kind)

    if options.ridge == 0:
        rank = np.linalg.matrix_rank(phi)
        if rank < 10:
            raise InsufficientVariationError(
                "appeal design matrix is rank deficient "
                f"(rank {rank} < 10); set ridge > 0 or vary all dimensions")

    rng = np.random.default_rng(options.seed)
    best = None  # (objective, start index, a, k, alternations)
    for start in range(options.starts):
        if start == 0:
            # deterministic start: appeal-only fit, then factors
            a = _a_step(phi, grads, appeal, deltas, np.zeros(3), max(options.ridge, 1e-12))
        else:
            a = None
        k = rng.normal(0.0, 10.0, size=3)
        if options.k_nonneg:
            k = np.abs(k)
        previous = np.inf
        iterations = 0
        for iterations in range(1, options.max_alternations + 1):
            if a is None or iterations > 1:
                a = _a_step(phi, grads, appeal, deltas, k, options.ridge)
            k = _k_step(grads @ a, deltas, options.k_nonneg)
            slopes = grads @ a
            value = float(np.sum((appeal - phi @ a) ** 2)
                          + np.sum((deltas - k[None, :] * slopes) ** 2))
            if previous - value <= options.tolerance * max(previous, 1.0):
                break
            previous = value
        if best is None or value < best[0]:
            best = (value, start, a, k, iterations)

    value, best_start, a, k, iterations = best
    polished = False
    if options.polish:
        a, k, value, polished = _polish(phi, grads, appeal, deltas, a, k,
                                        value, options.k_nonneg)

    model = AppealModel(a=a, k=k)
    predicted = phi @ model.a
    slopes = grads @ model.a
    appeal_residuals = appeal - predicted
    delta_residuals = deltas - model.k[None, :] * slopes
    appeal_term = float(np.sum(appeal_residuals**2))
    derivative_term = float(np.sum(delta_residuals**2))
    diagnostics = FitDiagnostics(
        objective=appeal_term + derivative_term,
        appeal_term=appeal_term,
        derivative_term=derivative_term,
        appeal_residuals=appeal_residuals,
        delta_residuals=delta_residuals,
        starts_used=options.starts,
        best_start=best_start,
        alternations=iterations,
        polished=polished,
        identifiability=identifiability_report(observations),
    )
    return model, diagnostics


def _polish(phi, grads, appeal, deltas, a, k, value, k_nonneg):
    """Trust-region refinement of the exact (unregularized) objective."""
    def residuals(x):
        a_, k_ = x[:10], x[10:]
        slopes = grads @ a_
        return np.concatenate([
            appeal - phi @ a_,
            (deltas - k_[None, :] * slopes).ravel(),
        ])

    x0 = np.concatenate([a, k])
    bounds = (-np.inf, np.inf)
    if k_nonneg:
        lower = np.full(13, -np.inf)
        lower[10:] = 0.0
        bounds = (lower, np.inf)
    result = least_squares(residuals, x0, bounds=bounds, method="trf",
                           xtol=1e-14, ftol=1e-14, gtol=1e-14, max_nfev=2000)
    refined = float(np.sum(result.fun**2))
    if refined < value:
        return result.x[:10], result.x[10:], refined, True
    return a, k, value, False


def refit_factors(a: np.ndarray, observations: list[Observation],
                  kind: str = ANALYTIC, k_nonneg: bool = False) -> AppealModel:
    """Optimal k1..k3 for a fixed coefficient vector (scalar least squares)."""
    _, grads, _, deltas = _stack(observations, kind)
    k = _k_step(grads @ np.asarray(a, dtype=float), deltas, k_nonneg)
    return AppealModel(a=np.asarray(a, dtype=float), k=k)
