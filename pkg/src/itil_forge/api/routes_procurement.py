from fastapi import APIRouter
from fastapi.responses import PlainTextResponse

from ..procurement import QuotationLine, coerce_category
from ..store import Engine
from . import schemas, views
from .deps import ActorDep, EngineDep

router = APIRouter(tags=["procurement"])


def _lines_from(body: schemas.QuotationAttach) -> list[QuotationLine]:
    return [
        QuotationLine(
            serial=line.serial,
            device=line.device,
            device_type=coerce_category(line.device_type),
            manufacturer=line.manufacturer,
            purpose=line.purpose,
            warranty_months=line.warranty_months,
            vendor_id=body.vendor_id,
            authorized_flag=True,
            vendor_contact=line.vendor_contact,
            location=line.location,
            quantity=line.quantity,
            unit_price=line.unit_price,
            quotation_person=line.quotation_person,
        )
        for line in body.lines
    ]


def _view(engine: Engine, request_id: str) -> dict:
    request = engine.get_procurement(request_id)
    with engine.lock:
        ack = engine.state.vendor_acks.get(request_id)
    return views.procurement_view(request, currency=engine.config.currency, ack=ack)


@router.post("/vendors", status_code=201)
def register_vendor(body: schemas.VendorCreate, engine: Engine = EngineDep, actor: str = ActorDep):
    vendor = engine.register_vendor(
        name=body.name, contact=body.contact, authorized_for=body.authorized_for, actor=actor, ts=body.ts
    )
    return views.vendor_view(vendor)


@router.get("/vendors")
def list_vendors(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        return [views.vendor_view(v) for v in engine.state.vendors.values()]


@router.get("/vendors/{vendor_id}")
def get_vendor(vendor_id: str, engine: Engine = EngineDep, actor: str = ActorDep):
    from ..procurement import get_vendor as _get

    with engine.lock:
        return views.vendor_view(_get(engine.state, vendor_id))


@router.post("/procurements", status_code=201)
def submit_requirement(body: schemas.RequirementSubmit, engine: Engine = EngineDep, actor: str = ActorDep):
    request = engine.submit_requirement(
        project_id=body.project_id, requirement_doc=body.requirement_doc, actor=actor, ts=body.ts
    )
    return _view(engine, request.id)


@router.get("/procurements")
def list_procurements(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        ids = list(engine.state.procurements)
    return [_view(engine, rid) for rid in ids]


@router.get("/procurements/{request_id}")
def get_procurement(request_id: str, engine: Engine = EngineDep, actor: str = ActorDep):
    return _view(engine, request_id)


@router.post("/procurements/{request_id}/quotations")
def attach_quotation(
    request_id: str, body: schemas.QuotationAttach, engine: Engine = EngineDep, actor: str = ActorDep
):
    engine.attach_quotation(
        request_id=request_id, vendor_id=body.vendor_id, lines=_lines_from(body), actor=actor, ts=body.ts
    )
    return _view(engine, request_id)


@router.post("/procurements/{request_id}/quotations/import-csv")
def import_quotation_csv(
    request_id: str, body: schemas.QuotationCsvImport, engine: Engine = EngineDep, actor: str = ActorDep
):
    engine.import_quotation_csv(
        request_id=request_id, vendor_id=body.vendor_id, csv_text=body.csv, actor=actor, ts=body.ts
    )
    return _view(engine, request_id)


@router.get("/procurements/{request_id}/quotations.csv", response_class=PlainTextResponse)
def export_quotations_csv(request_id: str, engine: Engine = EngineDep, actor: str = ActorDep):
    from ..procurement import render_quotation_csv

    request = engine.get_procurement(request_id)
    lines = [line for q in request.quotations for line in q.lines]
    return PlainTextResponse(render_quotation_csv(lines), media_type="text/csv")


@router.post("/procurements/{request_id}/select")
def select_vendor(
    request_id: str, body: schemas.VendorSelect, engine: Engine = EngineDep, actor: str = ActorDep
):
    engine.select_vendor(
        request_id=request_id, vendor_id=body.vendor_id, justification=body.justification,
        actor=actor, ts=body.ts,
    )
    return _view(engine, request_id)


@router.post("/procurements/{request_id}/approvals")
def record_approval(
    request_id: str, body: schemas.ApprovalRecord, engine: Engine = EngineDep, actor: str = ActorDep
):
    engine.record_approval(
        request_id=request_id, role=body.role, approver_name=body.approver_name, status=body.status,
        reason=body.reason, date_str=body.date, actor=actor, ts=body.ts,
    )
    return _view(engine, request_id)


@router.post("/procurements/{request_id}/close-lop")
def close_lop(request_id: str, body: schemas.GateClose, engine: Engine = EngineDep, actor: str = ActorDep):
    engine.close_lop(request_id=request_id, actor=actor, ts=body.ts)
    return _view(engine, request_id)


@router.post("/procurements/{request_id}/notify-vendor")
def notify_vendor(request_id: str, body: schemas.GateClose, engine: Engine = EngineDep, actor: str = ActorDep):
    note = engine.notify_vendor_approval(request_id=request_id, actor=actor, ts=body.ts)
    return views.notification_view(note)


@router.post("/procurements/{request_id}/vendor-ack")
def record_vendor_ack(
    request_id: str, body: schemas.VendorAck, engine: Engine = EngineDep, actor: str = ActorDep
):
    engine.record_vendor_ack(request_id=request_id, message=body.message, actor=actor, ts=body.ts)
    return _view(engine, request_id)
