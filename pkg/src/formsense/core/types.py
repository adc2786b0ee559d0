"""Domain types for the staged glassware assessment.

All types are immutable value objects; they validate their invariants at
construction time and are safe to share across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

RULES = ("R1", "R2", "R3")

DISSIMILARITY_SCALE = (0, 1, 2, 3)
DISSIMILARITY_LABELS = ("identical", "a little different", "different", "very different")

MIN_COMPARISONS = 3

APPEAL_MIN = 0.0
APPEAL_MAX = 10.0


@dataclass(frozen=True)
class DesignParams:
    """The three determining dimensions of a glass, in centimetres.

    d1: total height of the container (bowl)
    d2: height of the foot (stem)
    d3: diameter of the container
    """

    d1: float
    d2: float
    d3: float

    def __post_init__(self):
        for name in ("d1", "d2", "d3"):
            v = getattr(self, name)
            if not (v > 0):
                raise ValueError(f"{name} must be strictly positive, got {v}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.d1, self.d2, self.d3)


@dataclass(frozen=True)
class Product:
    """One stimulus presented for judgment."""

    id: int
    label: str
    dims: DesignParams

    def __post_init__(self):
        if self.id < 1:
            raise ValueError(f"product id must be >= 1, got {self.id}")


def check_product_ids(products) -> None:
    """Product ids must be unique and contiguous from 1, with N >= 2."""
    ids = sorted(p.id for p in products)
    if len(ids) < 2:
        raise ValueError("need at least 2 products")
    if ids != list(range(1, len(ids) + 1)):
        raise ValueError(f"product ids must be contiguous from 1, got {ids}")


@dataclass(frozen=True)
class ValidationReport:
    """Findings from a validation pass; empty means valid."""

    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class SparseDissimilarityMatrix:
    """Partially observed symmetric dissimilarities.

    Only the canonical half is stored: keys are (i, j) with i < j. The
    diagonal is implicitly zero and never stored. A stored value of 0 is a
    real "identical" judgment, distinct from an unobserved pair.

    The container accepts any nonnegative magnitudes so distance matrices
    can be embedded directly; conformance of subject judgments to the
    0..3 scale is checked by ``validate_dissimilarity`` and by the file
    loaders.
    """

    n: int
    entries: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least 2 products")
        for (i, j), v in self.entries.items():
            if not (1 <= i < j <= self.n):
                raise ValueError(f"pair ({i},{j}) out of range or not canonical")
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"value {v} for pair ({i},{j}) must be finite and >= 0")
        object.__setattr__(self, "entries", dict(self.entries))

    def get(self, i: int, j: int):
        """Observed value for an unordered pair, or None."""
        if i == j:
            return 0
        key = (i, j) if i < j else (j, i)
        return self.entries.get(key)

    def coverage(self) -> dict[int, int]:
        """Number of observed comparisons each product participates in."""
        counts = {i: 0 for i in range(1, self.n + 1)}
        for i, j in self.entries:
            counts[i] += 1
            counts[j] += 1
        return counts

    def observed_pairs(self):
        """Sorted list of (i, j, value) with i < j."""
        return [(i, j, v) for (i, j), v in sorted(self.entries.items())]

    def __len__(self):
        return len(self.entries)


def validate_dissimilarity(matrix: SparseDissimilarityMatrix) -> ValidationReport:
    """Check the protocol invariants of a dissimilarity matrix.

    Returns a report listing violations: out-of-range values, self-pairs,
    and products involved in fewer than three comparisons. An empty report
    means the matrix is valid. Structural problems (asymmetry, bad CSV)
    are raised by the loader, not reported here.
    """
    violations = []
    for (i, j), v in sorted(matrix.entries.items()):
        if i == j:
            violations.append(f"self-pair ({i},{i})")
        if v not in DISSIMILARITY_SCALE:
            violations.append(f"value {v} at ({i},{j}) out of 0..3")
    for pid, count in sorted(matrix.coverage().items()):
        if count < MIN_COMPARISONS:
            violations.append(f"coverage({pid})={count} < {MIN_COMPARISONS}")
    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class AppealScores:
    """One hedonic score per product on the continuous 0..10 scale."""

    scores: dict[int, float]

    def __post_init__(self):
        for pid, score in self.scores.items():
            if not (APPEAL_MIN <= score <= APPEAL_MAX):
                raise ValueError(f"appeal for product {pid} outside [0,10]: {score}")
        object.__setattr__(self, "scores", dict(self.scores))

    def require_complete(self, n: int) -> None:
        missing = [i for i in range(1, n + 1) if i not in self.scores]
        extra = [i for i in self.scores if not (1 <= i <= n)]
        if missing or extra:
            raise ValueError(f"appeal map incomplete: missing={missing} extra={extra}")

    def __getitem__(self, pid: int) -> float:
        return self.scores[pid]

    def __len__(self):
        return len(self.scores)


@dataclass(frozen=True)
class RuleAssessmentSet:
    """Per-product, per-rule appeal-change codes in {-1, 0, +1}."""

    codes: dict[tuple[int, str], int]

    def __post_init__(self):
        for (pid, rule), code in self.codes.items():
            if rule not in RULES:
                raise ValueError(f"unknown rule {rule!r} for product {pid}")
            if code not in (-1, 0, 1):
                raise ValueError(f"code for ({pid},{rule}) must be -1, 0 or 1: {code}")
        object.__setattr__(self, "codes", dict(self.codes))

    def require_complete(self, n: int) -> None:
        missing = [
            (i, r) for i in range(1, n + 1) for r in RULES if (i, r) not in self.codes
        ]
        if missing:
            raise ValueError(f"rule assessments incomplete: missing {missing[:6]}...")
        extra = [k for k in self.codes if not (1 <= k[0] <= n)]
        if extra:
            raise ValueError(f"rule assessments for unknown products: {extra}")

    def __getitem__(self, key: tuple[int, str]) -> int:
        return self.codes[key]

    def deltas(self, pid: int) -> tuple[int, int, int]:
        return tuple(self.codes[(pid, r)] for r in RULES)
