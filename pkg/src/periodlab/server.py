"""HTTP JSON service exposing the toolkit to scripts and the painter UI.

Endpoints mirror the CLI subcommands through the same payload builders, so
identical requests yield byte-identical JSON.  Malformed input is 400 with
a machine-readable reason; geometric validation failures are 422 and carry
the offending segment index when one is known.
"""
from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response

from . import api
from .errors import CycleValidationError, PeriodLabError

DEFAULT_PORT = 8642


def _json_response(payload, status=200):
    return Response(api.dumps(payload), status_code=status,
                    media_type="application/json")


def create_app(workspace=None):
    ws = workspace if workspace is not None else api.Workspace()
    app = FastAPI(title="periodlab", openapi_url=None, docs_url=None,
                  redoc_url=None)
    app.state.workspace = ws
    # the painter UI is static files on another origin; the service holds no
    # credentials or per-user state, so a permissive policy is safe
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(RequestValidationError)
    async def _malformed_body(request: Request, exc):
        return _json_response({"reason": "request body is not valid JSON"},
                              status=400)

    @app.exception_handler(api.RequestError)
    async def _bad_request(request: Request, exc):
        return _json_response({"reason": str(exc)}, status=400)

    @app.exception_handler(CycleValidationError)
    async def _invalid_cycle(request: Request, exc):
        return _json_response(
            {"reason": exc.message, "segment": exc.segment_index},
            status=422)

    @app.exception_handler(PeriodLabError)
    async def _computation_failed(request: Request, exc):
        return _json_response({"reason": str(exc), "segment": None},
                              status=422)

    def body_dict(body):
        if not isinstance(body, dict):
            raise api.RequestError("request body must be a JSON object")
        return body

    # sync endpoints run in the thread pool, so a long periods request
    # does not block lift or intersect traffic
    @app.post("/api/curve")
    def post_curve(body: dict):
        body = body_dict(body)
        basepoint = None
        if body.get("basepoint") is not None:
            basepoint = api.parse_cnum(body["basepoint"], "basepoint")
        labels = None
        if body.get("labels") is not None:
            raw = body["labels"]
            if not isinstance(raw, list):
                raise api.RequestError("labels must be an array")
            labels = [api.parse_cnum(v, f"labels[{k}]")
                      for k, v in enumerate(raw)]
        cid = ws.add_curve(body.get("curve", ""), basepoint=basepoint,
                           labels=labels)
        return _json_response(api.curve_payload(ws, cid))

    @app.post("/api/lift")
    def post_lift(body: dict):
        body = body_dict(body)
        cid = ws.resolve_curve(body.get("curve", ""))
        return _json_response(
            api.lift_payload(ws, cid, body.get("points"),
                             body.get("start_sheet", 0)))

    @app.post("/api/intersect")
    def post_intersect(body: dict):
        body = body_dict(body)
        if "cycles" in body:
            sid = ws.resolve_cycle_set(body["cycles"])
            pair = body.get("pair")
            if (not isinstance(pair, list) or len(pair) != 2
                    or not all(isinstance(v, str) for v in pair)):
                raise api.RequestError(
                    "pair must be an array of two cycle names")
            refs = [f"{sid}:{pair[0]}", f"{sid}:{pair[1]}"]
        else:
            refs = [body.get("cycle1"), body.get("cycle2")]
        return _json_response(api.intersect_payload(ws, refs[0], refs[1]))

    @app.post("/api/basis-check")
    def post_basis_check(body: dict):
        body = body_dict(body)
        ref = body["set"] if "set" in body else body
        sid = ws.resolve_cycle_set(ref)
        return _json_response(api.basis_check_payload(ws, sid))

    @app.post("/api/transform")
    def post_transform(body: dict):
        body = body_dict(body)
        src = ws.resolve_cycle_set(body.get("src"))
        dst = ws.resolve_cycle_set(body.get("dst"))
        return _json_response(api.transform_payload(ws, src, dst))

    @app.post("/api/periods")
    def post_periods(body: dict):
        body = body_dict(body)
        sid = ws.resolve_cycle_set(body.get("cycles"))
        tol = body.get("tol", api.DEFAULT_TOL)
        if not isinstance(tol, (int, float)) or isinstance(tol, bool):
            raise api.RequestError("tol must be a number")
        return _json_response(
            api.periods_payload(ws, sid,
                                differentials=body.get("differentials"),
                                tol=tol))

    @app.get("/api/klein/reference")
    def get_klein_reference():
        return _json_response(api.klein_reference_payload())

    return app


def pick_port(port=None):
    if port is not None:
        return int(port)
    env = os.environ.get("PERIODLAB_PORT")
    return int(env) if env else DEFAULT_PORT


def serve(port=None, host="127.0.0.1"):
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(), host=host, port=pick_port(port))
