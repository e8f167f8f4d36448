from fastapi import APIRouter

from ..store import Engine
from . import schemas, views
from .deps import ActorDep, EngineDep

router = APIRouter(prefix="/projects", tags=["projects"])


@router.post("", status_code=201)
def create_project(body: schemas.ProjectCreate, engine: Engine = EngineDep, actor: str = ActorDep):
    project = engine.create_project(name=body.name, organization=body.organization, actor=actor, ts=body.ts)
    return views.project_view(project)


@router.get("")
def list_projects(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        return [views.project_view(p) for p in engine.state.projects.values()]


@router.get("/{project_id}")
def get_project(project_id: str, engine: Engine = EngineDep, actor: str = ActorDep):
    return views.project_view(engine.get_project(project_id))


@router.post("/{project_id}/evidence")
def submit_evidence(
    project_id: str, body: schemas.EvidenceSubmit, engine: Engine = EngineDep, actor: str = ActorDep
):
    project = engine.submit_evidence(
        project_id=project_id, phase=body.phase, kind=body.kind, doc_ref=body.doc_ref,
        actor=actor, ts=body.ts,
    )
    return views.project_view(project)


@router.post("/{project_id}/gates/{phase}/close")
def close_gate(
    project_id: str, phase: str, body: schemas.GateClose, engine: Engine = EngineDep, actor: str = ActorDep
):
    project = engine.close_gate(project_id=project_id, phase=phase, actor=actor, ts=body.ts)
    return views.project_view(project)


@router.post("/{project_id}/advance")
def advance_phase(
    project_id: str, body: schemas.GateClose, engine: Engine = EngineDep, actor: str = ActorDep
):
    project = engine.advance_phase(project_id=project_id, actor=actor, ts=body.ts)
    return views.project_view(project)
