"""CSV loaders and serializers for the assessment data files.

Formats
-------
dissim.csv : (N+1) x (N+1) grid; header row/column carry product ids,
             cells are integers 0..3 or ``*`` for unobserved pairs.
appeal.csv : header ``id,score``; one row per product.
rules.csv  : header ``id,d1,d2,d3,R1,R2,R3``; one row per product.
"""
from __future__ import annotations

import csv
import io

from ..errors import AsymmetryError, NonZeroDiagonalError, ParseError
from .types import RULES, AppealScores, DesignParams, RuleAssessmentSet, SparseDissimilarityMatrix

MISSING = "*"


def _rows(text: str):
    return list(csv.reader(io.StringIO(text.strip())))


def load_matrix(text: str) -> SparseDissimilarityMatrix:
    """Parse a square dissimilarity CSV into its sparse canonical form.

    Mirrored cells must agree exactly; a value paired with ``*`` counts as
    disagreement. The diagonal must be all zeros.
    """
    rows = _rows(text)
    if len(rows) < 3:
        raise ParseError("matrix needs at least 2 products")
    header = rows[0][1:]
    n = len(header)
    if len(rows) != n + 1:
        raise ParseError(f"expected {n + 1} rows for {n} columns, got {len(rows)}")
    try:
        ids = [int(h) for h in header]
    except ValueError as exc:
        raise ParseError(f"bad header ids: {exc}") from None
    if ids != list(range(1, n + 1)):
        raise ParseError(f"header ids must be 1..{n}, got {ids}")

    grid = {}
    for r, row in enumerate(rows[1:], start=1):
        if len(row) != n + 1:
            raise ParseError(f"expected {n + 1} cells, got {len(row)}", row=r + 1)
        try:
            i = int(row[0])
        except ValueError:
            raise ParseError(f"bad row id {row[0]!r}", row=r + 1) from None
        if i != r:
            raise ParseError(f"row id {i} out of order", row=r + 1)
        for j, cell in enumerate(row[1:], start=1):
            cell = cell.strip()
            if cell == MISSING:
                grid[(i, j)] = None
            else:
                try:
                    grid[(i, j)] = int(cell)
                except ValueError:
                    raise ParseError(f"bad cell {cell!r} at ({i},{j})", row=r + 1) from None

    for i in range(1, n + 1):
        if grid[(i, i)] != 0:
            raise NonZeroDiagonalError(i, grid[(i, i)])

    entries = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            upper, lower = grid[(i, j)], grid[(j, i)]
            if upper != lower:
                raise AsymmetryError(i, j, upper, lower)
            if upper is not None:
                if not 0 <= upper <= 3:
                    raise ParseError(f"value {upper} at ({i},{j}) outside 0..3")
                entries[(i, j)] = upper
    return SparseDissimilarityMatrix(n=n, entries=entries)


def dump_matrix(matrix: SparseDissimilarityMatrix) -> str:
    """Serialize back to the square CSV form (inverse of load_matrix)."""
    n = matrix.n
    lines = ["id," + ",".join(str(j) for j in range(1, n + 1))]
    for i in range(1, n + 1):
        cells = []
        for j in range(1, n + 1):
            v = matrix.get(i, j)
            cells.append(MISSING if v is None else str(v))
        lines.append(f"{i}," + ",".join(cells))
    return "\n".join(lines) + "\n"


def _records(text: str, expected_header):
    rows = _rows(text)
    if not rows:
        raise ParseError("empty file")
    header = [h.strip() for h in rows[0]]
    if header != list(expected_header):
        raise ParseError(f"expected header {','.join(expected_header)}, got {','.join(header)}")
    return rows[1:]


def load_appeal(text: str) -> AppealScores:
    """Parse ``id,score`` rows; scores must lie in [0, 10]."""
    scores = {}
    for r, row in enumerate(_records(text, ("id", "score")), start=2):
        try:
            pid, score = int(row[0]), float(row[1])
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), row=r) from None
        if pid in scores:
            raise ParseError(f"duplicate product id {pid}", row=r)
        if not 0 <= score <= 10:
            raise ParseError(f"score {score} outside [0,10]", row=r)
        scores[pid] = score
    return AppealScores(scores)


def dump_appeal(appeal: AppealScores) -> str:
    lines = ["id,score"]
    for pid in sorted(appeal.scores):
        lines.append(f"{pid},{_fmt(appeal.scores[pid])}")
    return "\n".join(lines) + "\n"


def load_rules(text: str) -> RuleAssessmentSet:
    """Parse the rule-code columns of ``id,d1,d2,d3,R1,R2,R3`` rows."""
    codes = {}
    for r, row in enumerate(_records(text, ("id", "d1", "d2", "d3") + RULES), start=2):
        try:
            pid = int(row[0])
            values = [int(row[4 + k]) for k in range(3)]
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), row=r) from None
        for rule, value in zip(RULES, values):
            if value not in (-1, 0, 1):
                raise ParseError(f"code {value} for {rule} not in -1/0/1", row=r)
            if (pid, rule) in codes:
                raise ParseError(f"duplicate product id {pid}", row=r)
            codes[(pid, rule)] = value
    return RuleAssessmentSet(codes)


def load_dims(text: str) -> dict[int, DesignParams]:
    """Parse the dimension columns of ``id,d1,d2,d3,R1,R2,R3`` rows."""
    dims = {}
    for r, row in enumerate(_records(text, ("id", "d1", "d2", "d3") + RULES), start=2):
        try:
            pid = int(row[0])
            d1, d2, d3 = (float(row[k]) for k in (1, 2, 3))
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), row=r) from None
        if pid in dims:
            raise ParseError(f"duplicate product id {pid}", row=r)
        try:
            dims[pid] = DesignParams(d1, d2, d3)
        except ValueError as exc:
            raise ParseError(str(exc), row=r) from None
    return dims


def dump_rules(rules: RuleAssessmentSet, dims: dict[int, DesignParams]) -> str:
    lines = ["id," + ",".join(("d1", "d2", "d3") + RULES)]
    for pid in sorted(dims):
        d = dims[pid]
        codes = ",".join(str(rules[(pid, rule)]) for rule in RULES)
        lines.append(f"{pid},{_fmt(d.d1)},{_fmt(d.d2)},{_fmt(d.d3)},{codes}")
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    """Render floats without a trailing .0 so files stay human-diffable."""
    return str(int(x)) if float(x).is_integer() else repr(float(x))
