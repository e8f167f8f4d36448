from fastapi import APIRouter
from fastapi.responses import PlainTextResponse

from ..changes import render_digest_text
from ..store import Engine
from . import schemas, views
from .deps import ActorDep, EngineDep

router = APIRouter(prefix="/changes", tags=["changes"])


def _view(engine: Engine, change_id: str) -> dict:
    change = engine.get_change(change_id)
    with engine.lock:
        runs = list(engine.state.test_runs.get(change_id, []))
    return views.change_view(change, runs)


@router.post("", status_code=201)
def submit_change(body: schemas.ChangeSubmit, engine: Engine = EngineDep, actor: str = ActorDep):
    change = engine.submit_change(
        project_id=body.project_id, target=body.target, kind=body.kind, priority=body.priority,
        downtime_estimate_minutes=body.downtime_estimate_minutes, risk_note=body.risk_note,
        alternate_solution=body.alternate_solution, roi_justification=body.roi_justification,
        affected_departments=body.affected_departments, vendor_id=body.vendor_id, actor=actor, ts=body.ts,
    )
    return _view(engine, change.id)


@router.get("")
def list_changes(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        ids = list(engine.state.changes)
    return [_view(engine, cid) for cid in ids]


@router.get("/digest")
def change_digest(
    project_id: str, quarter: str, format: str = "json", engine: Engine = EngineDep, actor: str = ActorDep
):
    digest = engine.change_digest(project_id=project_id, period=quarter)
    if format == "text":
        return PlainTextResponse(render_digest_text(digest))
    return digest


@router.get("/{change_id}")
def get_change(change_id: str, engine: Engine = EngineDep, actor: str = ActorDep):
    return _view(engine, change_id)


@router.post("/{change_id}/cab")
def cab_decide(change_id: str, body: schemas.CabDecision, engine: Engine = EngineDep, actor: str = ActorDep):
    engine.cab_decide(
        change_id=change_id, approve=body.approve, head_signoff=body.head_signoff, reason=body.reason,
        actor=actor, ts=body.ts,
    )
    return _view(engine, change_id)


@router.post("/{change_id}/schedule")
def schedule_change(
    change_id: str, body: schemas.ChangeSchedule, engine: Engine = EngineDep, actor: str = ActorDep
):
    engine.schedule_change(change_id=change_id, when=body.when, now=body.now, actor=actor, ts=body.ts)
    return _view(engine, change_id)


@router.post("/{change_id}/test-runs")
def record_test_run(
    change_id: str, body: schemas.TestRunRecord, engine: Engine = EngineDep, actor: str = ActorDep
):
    engine.record_test_run(
        change_id=change_id, dummy_input=body.dummy_input, outcome=body.outcome, at=body.at,
        tester=body.tester or actor, actor=actor, ts=body.ts,
    )
    return _view(engine, change_id)


@router.post("/{change_id}/release")
def approve_release(
    change_id: str, body: schemas.ReleaseApprove, engine: Engine = EngineDep, actor: str = ActorDep
):
    engine.approve_release(change_id=change_id, at=body.at, approver=body.approver, actor=actor, ts=body.ts)
    return _view(engine, change_id)
