"""HTTP service around one model file.

The service owns a session: the model plus the configuration decisions and
variant/refinement selections made so far. Every state change bumps an
integer revision; responses carry it as an ETag and mutating requests may
send If-Match to fail fast (409, state untouched) when they raced another
writer. All analysis happens here; clients only render what they receive.

Routes (JSON):
  GET  /api/model          model document, session state, findings
  GET  /api/fp/analysis    configuration count, dead blocks, void flag,
                           propagation of the current decisions
  POST /api/fp/decisions   {"id", "state": In|Out|Clear} or {"clear": true};
                           a conflicting decision is reported, not committed
  POST /api/sp/resolve     {"block", "variants"?, "refinements"?}; merges the
                           selections into the session, returns the block's
                           effective view
  GET  /api/trace/report   allocation coverage report
  POST /api/model          replace the model; applied only when free of
                           error findings, resets decisions and selections

A static UI directory, when given, is mounted at / after the API routes.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import fp
from .diagnostics import InvalidModelError, diagnostic_to_obj, has_errors
from .document import (
    DuplicateIdError,
    SchemaError,
    model_from_obj,
    model_to_obj,
    parse_document,
    serialize_document,
)
from .elements import Model
from .sp import (
    IllegalSelectionError,
    SelectionState,
    check_sp_consistency,
    effective_block_to_obj,
    resolve_effective_block,
)
from .trace import build_trace_report, trace_report_to_obj
from .validate import NotFoundError, validate_model

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8377


class _Session:
    def __init__(self, model: Model, groups_enabled: bool, block_cap: int):
        self.model = model
        self.revision = 1
        self.decisions: dict[str, fp.DecisionState] = {}
        self.variants: dict[str, str] = {}
        self.refinements: dict[str, str] = {}
        self.groups_enabled = groups_enabled
        self.block_cap = block_cap
        self.lock = threading.Lock()
        self._tree: fp.BasicFeatureTree | None = None

    def tree(self) -> fp.BasicFeatureTree:
        if self._tree is None:
            self._tree = fp.normalize(self.model, self.groups_enabled)
        return self._tree

    def selection(self) -> SelectionState:
        return SelectionState(dict(self.variants), dict(self.refinements))

    def replace_model(self, model: Model) -> None:
        self.model = model
        self.decisions = {}
        self.variants = {}
        self.refinements = {}
        self._tree = None

    def decisions_obj(self) -> dict:
        return {block: state.value for block, state in sorted(self.decisions.items())}

    def selections_obj(self) -> dict:
        return {"variants": dict(sorted(self.variants.items())),
                "refinements": dict(sorted(self.refinements.items()))}


def create_app(model_path: str, groups_enabled: bool = False,
               block_cap: int = fp.DEFAULT_BLOCK_CAP,
               ui_dir: str | None = None, persist: bool = True) -> FastAPI:
    text = Path(model_path).read_text(encoding="utf-8")
    model = parse_document(text)
    diags = validate_model(model)
    if has_errors(diags):
        raise InvalidModelError(diags)

    session = _Session(model, groups_enabled, block_cap)
    app = FastAPI(title="imog", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"], expose_headers=["ETag"])

    def stamp(response: Response) -> None:
        response.headers["ETag"] = f'"{session.revision}"'

    def check_if_match(request: Request) -> None:
        header = request.headers.get("if-match")
        if header is None:
            return
        accepted = (f'"{session.revision}"', str(session.revision))
        if header.strip() not in accepted:
            raise HTTPException(
                status_code=409,
                detail={"reason": "revision mismatch", "revision": session.revision})

    def propagation_obj() -> dict:
        result = fp.propagate(session.tree(), session.decisions, session.block_cap)
        return fp.propagation_to_obj(result)

    @app.get("/api/model")
    def get_model(response: Response) -> dict:
        with session.lock:
            stamp(response)
            return {
                "revision": session.revision,
                "model": model_to_obj(session.model),
                "decisions": session.decisions_obj(),
                "selections": session.selections_obj(),
                "diagnostics": [diagnostic_to_obj(d) for d in validate_model(session.model)],
            }

    @app.get("/api/fp/analysis")
    def get_analysis(response: Response) -> dict:
        with session.lock:
            stamp(response)
            try:
                tree = session.tree()
                return {
                    "revision": session.revision,
                    "count": fp.count_configurations(tree, session.block_cap),
                    "dead": list(fp.dead_blocks(tree, session.block_cap)),
                    "void": fp.is_void(tree, session.block_cap),
                    "propagation": propagation_obj(),
                }
            except fp.CapExceededError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None

    @app.post("/api/fp/decisions")
    def post_decision(body: dict, request: Request, response: Response) -> dict:
        with session.lock:
            check_if_match(request)
            if body.get("clear") is True:
                proposed: dict[str, fp.DecisionState] = {}
            else:
                block = body.get("id")
                state = body.get("state")
                if not isinstance(block, str) or state not in ("In", "Out", "Clear"):
                    raise HTTPException(
                        status_code=400,
                        detail='expected {"id", "state": In|Out|Clear} or {"clear": true}')
                if block not in {b.id for b in session.model.functional.blocks}:
                    raise HTTPException(status_code=404,
                                        detail=f"unknown functional block {block!r}")
                proposed = dict(session.decisions)
                if state == "Clear":
                    proposed.pop(block, None)
                else:
                    proposed[block] = fp.DecisionState(state)
            result = fp.propagate(session.tree(), proposed, session.block_cap)
            if result.conflict is None:
                session.decisions = proposed
                session.revision += 1
            stamp(response)
            return {
                "revision": session.revision,
                "applied": result.conflict is None,
                "decisions": session.decisions_obj(),
                "propagation": fp.propagation_to_obj(result),
            }

    @app.post("/api/sp/resolve")
    def post_resolve(body: dict, request: Request, response: Response) -> dict:
        with session.lock:
            check_if_match(request)
            block = body.get("block")
            if not isinstance(block, str):
                raise HTTPException(status_code=400, detail='expected {"block": <id>}')
            variants = dict(session.variants)
            refinements = dict(session.refinements)
            for store, key in ((variants, "variants"), (refinements, "refinements")):
                patch = body.get(key, {})
                if not isinstance(patch, dict):
                    raise HTTPException(status_code=400, detail=f"{key} must be an object")
                for owner, chosen in patch.items():
                    if chosen is None:
                        store.pop(owner, None)
                    elif isinstance(chosen, str):
                        store[owner] = chosen
                    else:
                        raise HTTPException(status_code=400,
                                            detail=f"{key}[{owner!r}] must be an id or null")
            selection = SelectionState(variants, refinements)
            try:
                effective = resolve_effective_block(session.model, block, selection)
                diags = check_sp_consistency(session.model, selection,
                                             block_ids=frozenset({block}))
            except NotFoundError as exc:
                raise HTTPException(status_code=404, detail=str(exc.args[0])) from None
            except IllegalSelectionError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from None
            if (variants, refinements) != (session.variants, session.refinements):
                session.variants = variants
                session.refinements = refinements
                session.revision += 1
            stamp(response)
            return {
                "revision": session.revision,
                "block": effective_block_to_obj(effective),
                "diagnostics": [diagnostic_to_obj(d) for d in diags],
                "selections": session.selections_obj(),
            }

    @app.get("/api/trace/report")
    def get_trace_report(response: Response) -> dict:
        with session.lock:
            stamp(response)
            return {
                "revision": session.revision,
                "report": trace_report_to_obj(build_trace_report(session.model)),
            }

    @app.post("/api/model")
    def post_model(body: dict, request: Request, response: Response) -> dict:
        with session.lock:
            check_if_match(request)
            try:
                candidate = model_from_obj(body)
            except (SchemaError, DuplicateIdError) as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from None
            findings = validate_model(candidate)
            applied = not has_errors(findings)
            if applied:
                session.replace_model(candidate)
                session.revision += 1
                if persist:
                    Path(model_path).write_text(serialize_document(candidate),
                                                encoding="utf-8")
            stamp(response)
            return {
                "revision": session.revision,
                "applied": applied,
                "diagnostics": [diagnostic_to_obj(d) for d in findings],
            }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(model_path: str, host: str = DEFAULT_HOST, port: int = DEFAULT_PORT,
          groups_enabled: bool = False, block_cap: int = fp.DEFAULT_BLOCK_CAP,
          ui_dir: str | None = None, persist: bool = True) -> None:
    import uvicorn

    app = create_app(model_path, groups_enabled=groups_enabled, block_cap=block_cap,
                     ui_dir=ui_dir, persist=persist)
    uvicorn.run(app, host=host, port=port, log_level="warning")
