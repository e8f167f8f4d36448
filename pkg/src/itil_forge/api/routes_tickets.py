from datetime import datetime

from fastapi import APIRouter
from fastapi.responses import PlainTextResponse

from ..events import now_utc
from ..tickets import render_tickets_csv
from ..store import Engine
from . import schemas, views
from .deps import ActorDep, EngineDep

router = APIRouter(prefix="/tickets", tags=["tickets"])


@router.post("", status_code=201)
def open_ticket(body: schemas.TicketOpen, engine: Engine = EngineDep, actor: str = ActorDep):
    ticket = engine.open_ticket(
        category=body.category, issue=body.issue, username=body.username, asset_tag=body.asset_tag,
        risk_level=body.risk_level, scope=body.scope, department=body.department, actor=actor, ts=body.ts,
    )
    return views.ticket_view(ticket)


@router.get("")
def list_tickets(
    state: str | None = None, queue: str | None = None, engine: Engine = EngineDep, actor: str = ActorDep
):
    if queue == "priority":
        return [views.ticket_view(t) for t in engine.ticket_queue()]
    with engine.lock:
        tickets = list(engine.state.tickets.values())
    if state is not None:
        tickets = [t for t in tickets if t.state.value == state]
    return [views.ticket_view(t) for t in tickets]


@router.get("/breaches")
def escalation_breaches(now: datetime | None = None, engine: Engine = EngineDep, actor: str = ActorDep):
    hits = engine.escalation_breaches(now=now or now_utc())
    return [views.ticket_view(t) for t in hits]


@router.get("/export.csv", response_class=PlainTextResponse)
def export_tickets(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        text = render_tickets_csv(sorted(engine.state.tickets.values(), key=lambda t: t.id))
    return PlainTextResponse(text, media_type="text/csv")


@router.get("/{ticket_id}")
def get_ticket(ticket_id: str, engine: Engine = EngineDep, actor: str = ActorDep):
    return views.ticket_view(engine.get_ticket(ticket_id))


@router.post("/{ticket_id}/analyze")
def analyze(ticket_id: str, body: schemas.TicketAnalyze, engine: Engine = EngineDep, actor: str = ActorDep):
    ticket, suggestion = engine.analyze_ticket(
        ticket_id=ticket_id, root_cause=body.root_cause, actor=actor, ts=body.ts
    )
    return views.ticket_view(ticket, suggestion=suggestion)


@router.post("/{ticket_id}/attempts")
def record_attempt(
    ticket_id: str, body: schemas.TicketAttempt, engine: Engine = EngineDep, actor: str = ActorDep
):
    ticket = engine.record_attempt(ticket_id=ticket_id, text=body.text, actor=actor, ts=body.ts)
    return views.ticket_view(ticket)


@router.post("/{ticket_id}/resolve")
def resolve(ticket_id: str, body: schemas.TicketResolve, engine: Engine = EngineDep, actor: str = ActorDep):
    ticket = engine.resolve_ticket(
        ticket_id=ticket_id, resolution=body.resolution, permanence=body.permanence, at=body.at,
        actor=actor, ts=body.ts,
    )
    return views.ticket_view(ticket)


@router.post("/{ticket_id}/escalate")
def escalate(ticket_id: str, body: schemas.TicketEscalate, engine: Engine = EngineDep, actor: str = ActorDep):
    ticket = engine.escalate_ticket(
        ticket_id=ticket_id, to_level=body.to_level, reason=body.reason, at=body.at, actor=actor, ts=body.ts
    )
    return views.ticket_view(ticket)


@router.post("/{ticket_id}/close")
def close(ticket_id: str, body: schemas.TicketClose, engine: Engine = EngineDep, actor: str = ActorDep):
    ticket = engine.close_ticket(
        ticket_id=ticket_id, closure_kind=body.closure_kind, approval_ref=body.approval_ref, at=body.at,
        actor=actor, ts=body.ts,
    )
    return views.ticket_view(ticket)
