from .types import (
    APPEAL_MAX,
    APPEAL_MIN,
    DISSIMILARITY_LABELS,
    DISSIMILARITY_SCALE,
    MIN_COMPARISONS,
    RULES,
    AppealScores,
    DesignParams,
    Product,
    RuleAssessmentSet,
    SparseDissimilarityMatrix,
    ValidationReport,
    check_product_ids,
    validate_dissimilarity,
)
from .io import (
    dump_appeal,
    dump_matrix,
    dump_rules,
    load_appeal,
    load_dims,
    load_matrix,
    load_rules,
)
from .session import COMPLETE, OPEN, Session

__all__ = [
    "APPEAL_MAX",
    "APPEAL_MIN",
    "COMPLETE",
    "DISSIMILARITY_LABELS",
    "DISSIMILARITY_SCALE",
    "MIN_COMPARISONS",
    "OPEN",
    "RULES",
    "AppealScores",
    "DesignParams",
    "Product",
    "RuleAssessmentSet",
    "Session",
    "SparseDissimilarityMatrix",
    "ValidationReport",
    "check_product_ids",
    "dump_appeal",
    "dump_matrix",
    "dump_rules",
    "load_appeal",
    "load_dims",
    "load_matrix",
    "load_rules",
    "validate_dissimilarity",
]
