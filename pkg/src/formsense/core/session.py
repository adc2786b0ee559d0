"""Assessment sessions: staged data collection with protocol gating.

The three stages (pairwise dissimilarity, hedonic appeal, rule judgments)
must be completed in order. The ordering is methodological, so it is
enforced here in the data model, not just in user interfaces.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import CoverageError, StageOrderError
from .types import (
    MIN_COMPARISONS,
    RULES,
    AppealScores,
    DesignParams,
    Product,
    RuleAssessmentSet,
    SparseDissimilarityMatrix,
    check_product_ids,
)

OPEN = "open"
COMPLETE = "complete"


@dataclass
class Session:
    """A single subject's assessment of a fixed product set.

    Mutation is not thread-safe; callers serialize writes per session
    (the HTTP service holds one lock per session).
    """

    id: str
    products: list[Product]
    comparisons: dict[tuple[int, int], int] = field(default_factory=dict)
    appeal: AppealScores | None = None
    rules: RuleAssessmentSet | None = None
    stage_status: dict[int, str] = field(default_factory=lambda: {1: OPEN, 2: OPEN, 3: OPEN})
    audit: list[dict] = field(default_factory=list)

    def __post_init__(self):
        check_product_ids(self.products)

    @property
    def n(self) -> int:
        return len(self.products)

    def product(self, pid: int) -> Product:
        for p in self.products:
            if p.id == pid:
                return p
        raise KeyError(pid)

    # -- stage 1 ------------------------------------------------------

    def record_comparison(self, i: int, j: int, value: int) -> None:
        """Store one pairwise judgment; re-submitting a pair overwrites it
        and the prior value is kept in the audit log."""
        if self.stage_status[1] == COMPLETE:
            raise StageOrderError("stage 1 is already complete")
        if i == j:
            raise ValueError("cannot compare a product with itself")
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise KeyError(f"unknown product in pair ({i},{j})")
        if value not in (0, 1, 2, 3):
            raise ValueError(f"dissimilarity must be 0..3, got {value}")
        key = (i, j) if i < j else (j, i)
        if key in self.comparisons:
            self.audit.append(
                {"seq": len(self.audit), "pair": list(key),
                 "prior": self.comparisons[key], "new": value}
            )
        self.comparisons[key] = value

    def coverage(self) -> dict[int, int]:
        counts = {p.id: 0 for p in self.products}
        for i, j in self.comparisons:
            counts[i] += 1
            counts[j] += 1
        return counts

    def under_covered(self) -> dict[int, int]:
        return {pid: c for pid, c in self.coverage().items() if c < MIN_COMPARISONS}

    def complete_stage1(self) -> None:
        under = self.under_covered()
        if under:
            raise CoverageError(under)
        self.stage_status[1] = COMPLETE

    def dissimilarity_matrix(self) -> SparseDissimilarityMatrix:
        return SparseDissimilarityMatrix(n=self.n, entries=dict(self.comparisons))

    # -- stage 2 ------------------------------------------------------

    def set_appeal(self, scores: dict[int, float]) -> None:
        """Record the complete hedonic map; requires stage 1 complete."""
        if self.stage_status[1] != COMPLETE:
            raise StageOrderError("stage 1 must be performed before stage 2")
        appeal = AppealScores(dict(scores))
        appeal.require_complete(self.n)
        self.appeal = appeal
        self.stage_status[2] = COMPLETE

    # -- stage 3 ------------------------------------------------------

    def set_rules(self, codes: dict[int, tuple[int, int, int]]) -> None:
        """Record the complete rule-judgment map; requires stage 2 complete."""
        if self.stage_status[2] != COMPLETE:
            raise StageOrderError("stage 2 must be completed before stage 3")
        flat = {}
        for pid, deltas in codes.items():
            if len(deltas) != 3:
                raise ValueError(f"product {pid}: need one code per rule")
            for rule, delta in zip(RULES, deltas):
                flat[(int(pid), rule)] = int(delta)
        rules = RuleAssessmentSet(flat)
        rules.require_complete(self.n)
        self.rules = rules
        self.stage_status[3] = COMPLETE

    # -- persistence --------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "products": [
                {"id": p.id, "label": p.label,
                 "dims": {"d1": p.dims.d1, "d2": p.dims.d2, "d3": p.dims.d3}}
                for p in self.products
            ],
            "stage_status": {str(k): v for k, v in self.stage_status.items()},
            "stage1": {"entries": [[i, j, v] for (i, j), v in sorted(self.comparisons.items())]},
            "stage2": {str(pid): s for pid, s in sorted(self.appeal.scores.items())} if self.appeal else None,
            "stage3": {str(pid): list(self.rules.deltas(pid)) for pid in range(1, self.n + 1)} if self.rules else None,
            "audit": list(self.audit),
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Session":
        products = [
            Product(id=p["id"], label=p["label"],
                    dims=DesignParams(**p["dims"]))
            for p in data["products"]
        ]
        session = cls(id=data["id"], products=products)
        session.comparisons = {(i, j): v for i, j, v in data.get("stage1", {}).get("entries", [])}
        status = data.get("stage_status", {})
        session.stage_status = {k: status.get(str(k), OPEN) for k in (1, 2, 3)}
        if data.get("stage2"):
            session.appeal = AppealScores({int(k): float(v) for k, v in data["stage2"].items()})
        if data.get("stage3"):
            flat = {}
            for pid, deltas in data["stage3"].items():
                for rule, delta in zip(RULES, deltas):
                    flat[(int(pid), rule)] = int(delta)
            session.rules = RuleAssessmentSet(flat)
        session.audit = list(data.get("audit", []))
        return session

    @classmethod
    def from_json(cls, text: str) -> "Session":
        return cls.from_dict(json.loads(text))
