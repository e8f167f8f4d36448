"""Vendor scorecards, outages, notifications and the audit-event feed."""

from fastapi import APIRouter
from fastapi.responses import PlainTextResponse

from ..errors import NotFound
from ..sla import render_annual_text, render_quarterly_text
from ..store import Engine
from . import schemas, views
from .deps import ActorDep, EngineDep

router = APIRouter(tags=["operations"])


@router.get("/vendors/{vendor_id}/reports")
def quarterly_report(
    vendor_id: str, period: str, format: str = "json", engine: Engine = EngineDep, actor: str = ActorDep
):
    report = engine.vendor_quarterly_report(vendor_id=vendor_id, period=period)
    if format == "text":
        return PlainTextResponse(render_quarterly_text(report))
    return views.quarterly_view(report)


@router.get("/vendors/{vendor_id}/reports/annual")
def annual_report(
    vendor_id: str, year: int, format: str = "json", engine: Engine = EngineDep, actor: str = ActorDep
):
    report = engine.vendor_annual_report(vendor_id=vendor_id, year=year)
    if format == "text":
        return PlainTextResponse(render_annual_text(report))
    return views.annual_view(report)


@router.post("/vendors/{vendor_id}/surveys", status_code=201)
def record_survey(
    vendor_id: str, body: schemas.SurveyRecord, engine: Engine = EngineDep, actor: str = ActorDep
):
    survey = engine.record_survey(
        vendor_id=vendor_id, period=body.period, scores=body.scores, actor=actor, ts=body.ts
    )
    return views.survey_view(survey, vendor_id)


@router.get("/vendors/{vendor_id}/surveys")
def list_surveys(vendor_id: str, engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        return [
            views.survey_view(s, vendor_id)
            for key, s in sorted(engine.state.surveys.items())
            if key.startswith(f"{vendor_id}:")
        ]


@router.post("/vendors/{vendor_id}/renewal-evaluation")
def evaluate_renewal(
    vendor_id: str, body: schemas.RenewalEvaluate, engine: Engine = EngineDep, actor: str = ActorDep
):
    decision = engine.evaluate_renewal(vendor_id=vendor_id, year=body.year, actor=actor, ts=body.ts)
    return views.decision_view(decision)


@router.get("/vendors/{vendor_id}/renewal-evaluation")
def get_renewal(vendor_id: str, year: int, engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        decision = engine.state.renewal_decisions.get(f"{vendor_id}:{year}")
    if decision is None:
        raise NotFound("no-renewal-decision", f"no renewal evaluation recorded for {vendor_id} in {year}")
    return views.decision_view(decision)


@router.post("/outages/contacts")
def register_contacts(body: schemas.ServiceContacts, engine: Engine = EngineDep, actor: str = ActorDep):
    users = engine.register_service_contacts(service=body.service, users=body.users, actor=actor, ts=body.ts)
    return {"service": body.service, "users": users}


@router.get("/outages/contacts")
def list_contacts(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        return [{"service": s, "users": u} for s, u in sorted(engine.state.service_contacts.items())]


@router.post("/outages", status_code=201)
def open_outage(body: schemas.OutageOpen, engine: Engine = EngineDep, actor: str = ActorDep):
    outage = engine.open_outage(
        service=body.service, start=body.start, alternate_endpoint=body.alternate_endpoint,
        actor=actor, ts=body.ts,
    )
    return views.outage_view(outage)


@router.get("/outages")
def list_outages(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        return [views.outage_view(o) for o in engine.state.outages.values()]


@router.post("/outages/{service}/close")
def close_outage(service: str, body: schemas.OutageClose, engine: Engine = EngineDep, actor: str = ActorDep):
    outage = engine.close_outage(service=service, end=body.end, now=body.now, actor=actor, ts=body.ts)
    return views.outage_view(outage)


@router.get("/notifications")
def list_notifications(
    kind: str | None = None, entity_id: str | None = None, engine: Engine = EngineDep, actor: str = ActorDep
):
    with engine.lock:
        notes = list(engine.state.notifications.values())
    if kind is not None:
        notes = [n for n in notes if n.kind.value == kind]
    if entity_id is not None:
        notes = [n for n in notes if n.entity_id == entity_id]
    return [views.notification_view(n) for n in notes]


@router.get("/events")
def list_events(
    since_seq: int = 0, limit: int | None = None, engine: Engine = EngineDep, actor: str = ActorDep
):
    return [views.event_view(e) for e in engine.events_view(since_seq=since_seq, limit=limit)]
