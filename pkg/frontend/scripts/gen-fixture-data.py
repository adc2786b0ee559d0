#!/usr/bin/env python3
"""Regenerates tests/fixture-data.ts from the installed formsense fixtures."""
import json
from pathlib import Path

from formsense.core.fixtures import load_fixture_appeal, load_fixture_matrix, load_fixture_rules

pairs = load_fixture_matrix().observed_pairs()
appeal = load_fixture_appeal().scores
rules = load_fixture_rules()

lines = [
    "/** The bundled study's data, mirrored from the server fixtures for",
    " * the UI replay test. Regenerate with scripts/gen-fixture-data.py",
    " * whenever the bundled CSVs change. */",
    "",
    "export const FIXTURE_COMPARISONS: [number, number, number][] = [",
]
for i, j, v in pairs:
    lines.append(f"  [{i}, {j}, {v}],")
lines.append("];")
lines.append("")
lines.append("/** appeal score -> product ids (piles of equal appeal) */")
piles = {}
for pid, score in sorted(appeal.items()):
    piles.setdefault(score, []).append(pid)
lines.append("export const FIXTURE_PILES: [number, number[]][] = [")
for score in sorted(piles):
    rendered = int(score) if float(score).is_integer() else score
    lines.append(f"  [{rendered}, {json.dumps(piles[score])}],")
lines.append("];")
lines.append("")
lines.append("export const FIXTURE_RULES: Record<number, [number, number, number]> = {")
for pid in range(1, 19):
    lines.append(f"  {pid}: {json.dumps(list(rules.deltas(pid)))},")
lines.append("};")

out = Path(__file__).resolve().parent.parent / "tests" / "fixture-data.ts"
out.write_text("\n".join(lines) + "\n")
print(f"wrote {out}")
