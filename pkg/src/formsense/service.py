"""HTTP service for live assessment sessions.

Exposes session CRUD, staged data entry with protocol gating, stimulus
rendering, and the full analysis pipeline. Sessions are persisted as
JSON files compatible with the CLI, so either tool can pick up where the
other left off.

Error codes follow the protocol semantics: 400 malformed request, 404
unknown session/product, 409 stage-order violation, 422 value out of
range.
"""
from __future__ import annotations

import threading
import uuid
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse, Response

from .core.fixtures import fixture_products, load_fixture_template
from .core.session import COMPLETE, Session
from .core.types import DesignParams, Product
from .errors import CoverageError, StageOrderError
from .geometry import ProfileTemplate, apply_rule, generate_profile, profile_svg
from .pipeline import PipelineSettings, run_pipeline


class SessionStore:
    """File-backed session map with per-session write serialization."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._registry_lock = threading.Lock()

    def _path(self, session_id: str) -> Path:
        safe = "".join(c for c in session_id if c.isalnum() or c in "-_")
        return self.directory / f"{safe}.json"

    def lock(self, session_id: str) -> threading.RLock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.RLock())

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            session = self._sessions.get(session_id)
        if session is not None:
            return session
        path = self._path(session_id)
        if path.exists():
            session = Session.from_json(path.read_text())
            with self._registry_lock:
                self._sessions.setdefault(session_id, session)
            return self._sessions[session_id]
        raise KeyError(session_id)

    def add(self, session: Session) -> None:
        with self._registry_lock:
            if session.id in self._sessions or self._path(session.id).exists():
                raise ValueError(f"session {session.id!r} already exists")
            self._sessions[session.id] = session
        self.persist(session)

    def persist(self, session: Session) -> None:
        path = self._path(session.id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(session.to_json())
        tmp.replace(path)

    def ids(self) -> list[str]:
        with self._registry_lock:
            known = set(self._sessions)
        known.update(p.stem for p in self.directory.glob("*.json"))
        return sorted(known)


def create_app(store_dir: Path | str = "sessions",
               frontend_dir: Path | str | None = None) -> FastAPI:
    store = SessionStore(Path(store_dir))
    template = ProfileTemplate.from_dict(load_fixture_template())
    default_products = {p.id: p for p in fixture_products()}

    app = FastAPI(title="formsense assessment service", version="0.1.0")
    app.state.store = store

    def _session_or_404(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(404, f"unknown session {session_id!r}") from None

    def _bad_request(message: str):
        raise HTTPException(400, message)

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        products_raw = payload.get("products")
        if not isinstance(products_raw, list) or not products_raw:
            _bad_request("body must carry a nonempty 'products' list")
        products = []
        for index, entry in enumerate(products_raw):
            try:
                dims = DesignParams(**{k: float(v) for k, v in entry["dims"].items()})
                pid = int(entry.get("id", index + 1))
                label = str(entry.get("label", f"G{pid}"))
            except (KeyError, TypeError, ValueError) as exc:
                _bad_request(f"bad product at index {index}: {exc}")
            products.append(Product(id=pid, label=label, dims=dims))
        session_id = str(payload.get("id") or uuid.uuid4())
        try:
            session = Session(id=session_id, products=products)
            store.add(session)
        except ValueError as exc:
            _bad_request(str(exc))
        return session.to_dict()

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": store.ids()}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_or_404(session_id).to_dict()

    @app.post("/sessions/{session_id}/comparisons")
    def post_comparison(session_id: str, payload: dict = Body(...)):
        session = _session_or_404(session_id)
        try:
            i, j, value = int(payload["i"]), int(payload["j"]), int(payload["value"])
        except (KeyError, TypeError, ValueError):
            _bad_request("body must carry integer fields i, j, value")
        with store.lock(session_id):
            try:
                session.record_comparison(i, j, value)
            except StageOrderError as exc:
                raise HTTPException(409, str(exc)) from None
            except KeyError as exc:
                raise HTTPException(404, f"unknown product {exc}") from None
            except ValueError as exc:
                raise HTTPException(422, str(exc)) from None
            store.persist(session)
        return {"recorded": [i, j, value], "coverage": session.coverage()}

    @app.get("/sessions/{session_id}/coverage")
    def get_coverage(session_id: str):
        session = _session_or_404(session_id)
        return {
            "coverage": session.coverage(),
            "under_covered": session.under_covered(),
            "complete": session.stage_status[1] == COMPLETE,
        }

    @app.post("/sessions/{session_id}/stage1/complete")
    def complete_stage1(session_id: str):
        session = _session_or_404(session_id)
        with store.lock(session_id):
            try:
                session.complete_stage1()
            except CoverageError as exc:
                return JSONResponse(
                    status_code=409,
                    content={"detail": str(exc), "under_covered": exc.under_covered},
                )
            store.persist(session)
        return {"stage_status": {str(k): v for k, v in session.stage_status.items()}}

    @app.put("/sessions/{session_id}/appeal")
    def put_appeal(session_id: str, payload: dict = Body(...)):
        session = _session_or_404(session_id)
        try:
            scores = {int(k): float(v) for k, v in payload.items()}
        except (TypeError, ValueError):
            _bad_request("body must map product id -> score")
        with store.lock(session_id):
            try:
                session.set_appeal(scores)
            except StageOrderError as exc:
                raise HTTPException(409, str(exc)) from None
            except ValueError as exc:
                raise HTTPException(422, str(exc)) from None
            store.persist(session)
        return {"stage_status": {str(k): v for k, v in session.stage_status.items()}}

    @app.put("/sessions/{session_id}/rules")
    def put_rules(session_id: str, payload: dict = Body(...)):
        session = _session_or_404(session_id)
        try:
            codes = {int(k): tuple(int(d) for d in v) for k, v in payload.items()}
        except (TypeError, ValueError):
            _bad_request("body must map product id -> [dR1, dR2, dR3]")
        with store.lock(session_id):
            try:
                session.set_rules(codes)
            except StageOrderError as exc:
                raise HTTPException(409, str(exc)) from None
            except ValueError as exc:
                raise HTTPException(422, str(exc)) from None
            store.persist(session)
        return {"stage_status": {str(k): v for k, v in session.stage_status.items()}}

    @app.get("/products/{product_id}/profile.svg")
    def product_profile(product_id: int,
                        rule: str | None = Query(default=None),
                        delta: float | None = Query(default=None),
                        session: str | None = Query(default=None)):
        if session is not None:
            source = {p.id: p for p in _session_or_404(session).products}
        else:
            source = default_products
        product = source.get(product_id)
        if product is None:
            raise HTTPException(404, f"unknown product {product_id}")
        params = product.dims
        if rule is not None:
            if rule not in ("R1", "R2", "R3"):
                raise HTTPException(422, f"unknown rule {rule!r}")
            if delta is None:
                delta = 0.1 * getattr(params, {"R1": "d1", "R2": "d2", "R3": "d3"}[rule])
            try:
                params = apply_rule(params, rule, delta)
            except ValueError as exc:
                raise HTTPException(422, str(exc)) from None
        shape = generate_profile(template, params)
        return Response(content=profile_svg(shape), media_type="image/svg+xml")

    @app.post("/sessions/{session_id}/analyze")
    def analyze(session_id: str, payload: dict = Body(default={})):
        session = _session_or_404(session_id)
        try:
            k = int(payload.get("k", 2))
            seed = int(payload.get("seed", 0))
        except (TypeError, ValueError):
            _bad_request("k and seed must be integers")
        with store.lock(session_id):
            if session.stage_status[3] != COMPLETE:
                raise HTTPException(409, "all three stages must be complete before analysis")
            snapshot = Session.from_dict(session.to_dict())
        # analysis runs outside the session lock so other sessions and
        # writes to this one are never blocked by the computation
        out_dir = store.directory / "analysis" / session_id
        settings = PipelineSettings(k=k, seed=seed)
        return run_pipeline(snapshot, settings, out_dir=out_dir)

    if frontend_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        frontend_dir = candidate if candidate.exists() else None
    if frontend_dir is not None and Path(frontend_dir).exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
