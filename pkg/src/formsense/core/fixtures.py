"""Access to the bundled glassware-study fixtures.

The directory can be overridden with the ``FORMSENSE_FIXTURES``
environment variable, which is how alternative data sets are swapped in
without reinstalling the package.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

from .io import load_appeal, load_dims, load_matrix, load_rules
from .session import Session
from .types import Product

_BUNDLED = Path(__file__).resolve().parent.parent / "fixtures" / "paper"


def fixture_dir() -> Path:
    override = os.environ.get("FORMSENSE_FIXTURES")
    return Path(override) if override else _BUNDLED


def fixture_path(name: str) -> Path:
    return fixture_dir() / name


def load_fixture_matrix():
    return load_matrix(fixture_path("dissim.csv").read_text())


def load_fixture_appeal():
    return load_appeal(fixture_path("appeal.csv").read_text())


def load_fixture_rules():
    return load_rules(fixture_path("rules.csv").read_text())


def load_fixture_dims():
    return load_dims(fixture_path("rules.csv").read_text())


def load_fixture_template() -> dict:
    return json.loads(fixture_path("template.json").read_text())


def fixture_products() -> list[Product]:
    dims = load_fixture_dims()
    return [Product(id=pid, label=f"G{pid}", dims=d) for pid, d in sorted(dims.items())]


def fixture_session(session_id: str = "paper-fixture") -> Session:
    """The bundled study data assembled into a completed session."""
    session = Session(id=session_id, products=fixture_products())
    for i, j, v in load_fixture_matrix().observed_pairs():
        session.record_comparison(i, j, v)
    session.complete_stage1()
    session.set_appeal(load_fixture_appeal().scores)
    rules = load_fixture_rules()
    session.set_rules({pid: rules.deltas(pid) for pid in range(1, 19)})
    return session
