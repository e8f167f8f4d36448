"""FastAPI application factory over a single engine instance."""

from __future__ import annotations

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from ..config import ServiceConfig
from ..errors import EngineError
from ..store import Engine
from . import (
    routes_assets,
    routes_changes,
    routes_lifecycle,
    routes_operations,
    routes_procurement,
    routes_tickets,
)

logger = logging.getLogger(__name__)


def create_app(config: ServiceConfig | None = None, engine: Engine | None = None) -> FastAPI:
    if engine is None:
        engine = Engine(config or ServiceConfig())

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        engine.close()

    app = FastAPI(title="itil-forge", version="0.1.0", lifespan=lifespan)
    app.state.engine = engine
    # the web console is served from a different origin
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["Authorization", "Content-Type"],
    )

    @app.exception_handler(EngineError)
    def engine_error(request: Request, exc: EngineError) -> JSONResponse:
        return JSONResponse(status_code=exc.http_status, content=exc.to_dict())

    @app.exception_handler(RequestValidationError)
    def request_validation(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"code": "validation", "message": "invalid request body", "details": {"errors": exc.errors()}},
        )

    @app.exception_handler(StarletteHTTPException)
    def http_error(request: Request, exc: StarletteHTTPException) -> JSONResponse:
        if isinstance(exc.detail, dict) and "code" in exc.detail:
            body = exc.detail
        else:
            body = {"code": "http-error", "message": str(exc.detail), "details": {}}
        return JSONResponse(status_code=exc.status_code, content=body)

    @app.get("/health")
    def health():
        return {"status": "ok", "events": engine.log.next_seq - 1}

    app.include_router(routes_lifecycle.router)
    app.include_router(routes_procurement.router)
    app.include_router(routes_assets.router)
    app.include_router(routes_changes.router)
    app.include_router(routes_tickets.router)
    app.include_router(routes_operations.router)

    return app
