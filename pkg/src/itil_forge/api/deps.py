"""Shared dependencies: engine access and bearer-token actor resolution."""

from __future__ import annotations

from fastapi import Depends, HTTPException, Request

from ..store import Engine


def get_engine(request: Request) -> Engine:
    return request.app.state.engine


def require_actor(request: Request) -> str:
    header = request.headers.get("authorization", "")
    if not header.lower().startswith("bearer "):
        raise HTTPException(
            status_code=401,
            detail={"code": "unauthorized", "message": "missing bearer token", "details": {}},
        )
    token = header[7:].strip()
    actor = request.app.state.engine.config.api_tokens.get(token)
    if actor is None:
        raise HTTPException(
            status_code=401,
            detail={"code": "unauthorized", "message": "unknown token", "details": {}},
        )
    return actor


EngineDep = Depends(get_engine)
ActorDep = Depends(require_actor)
