"""Procurement flow: requirement, competing quotations, four-role approval, LOP closure.

Quotation sheets mirror the procurement sheet columns exactly; the CSV
surface keeps the original header spellings ("Sl.", "Propose") while the
internal field names stay readable. Prices are integer minor units; the
currency code lives in service config.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, fields as dc_fields
from datetime import datetime
from decimal import Decimal, InvalidOperation
from enum import Enum
from typing import TYPE_CHECKING

from . import lifecycle, notifications
from .errors import NotFound, RuleViolation, StateConflict, ValidationFailed
from .events import EventDraft, iso, parse_ts

if TYPE_CHECKING:  # pragma: no cover
    from .config import ServiceConfig
    from .state import EngineState


class DeviceCategory(str, Enum):
    NetworkingDevice = "NetworkingDevice"
    Laptops = "Laptops"
    Desktops = "Desktops"
    Servers = "Servers"
    Storage = "Storage"
    SecurityDevice = "SecurityDevice"


class ApproverRole(str, Enum):
    IT = "IT"
    ProjectManagement = "ProjectManagement"
    Operations = "Operations"
    FinanceHead = "FinanceHead"


ALL_ROLES: tuple[ApproverRole, ...] = tuple(ApproverRole)

CSV_HEADER = [
    "Sl.",
    "Device",
    "Device Type",
    "Manufacturer",
    "Propose",
    "Warranty",
    "Vendor",
    "Authorized or not",
    "Vendor contact no",
    "Location",
    "Quantity",
    "Price (in RS)",
    "Quotation person",
]

# internal field -> sheet column, in column order
FIELD_COLUMNS = {
    "serial": "Sl.",
    "device": "Device",
    "device_type": "Device Type",
    "manufacturer": "Manufacturer",
    "purpose": "Propose",
    "warranty_months": "Warranty",
    "vendor_id": "Vendor",
    "authorized_flag": "Authorized or not",
    "vendor_contact": "Vendor contact no",
    "location": "Location",
    "quantity": "Quantity",
    "unit_price": "Price (in RS)",
    "quotation_person": "Quotation person",
}


@dataclass
class Vendor:
    id: str
    name: str
    contact: str
    authorized_for: set[DeviceCategory]

    def authorized(self, category: DeviceCategory) -> bool:
        return category in self.authorized_for


@dataclass
class QuotationLine:
    serial: int
    device: str
    device_type: DeviceCategory
    manufacturer: str
    purpose: str
    warranty_months: int
    vendor_id: str
    authorized_flag: bool
    vendor_contact: str
    location: str
    quantity: int
    unit_price: int
    quotation_person: str

    def validate(self) -> None:
        if self.quantity <= 0:
            raise ValidationFailed("bad-quantity", f"quantity must be > 0, got {self.quantity}")
        if self.unit_price < 0:
            raise ValidationFailed("bad-price", f"unit price must be >= 0, got {self.unit_price}")
        if self.warranty_months < 0:
            raise ValidationFailed("bad-warranty", f"warranty months must be >= 0, got {self.warranty_months}")


@dataclass
class Quotation:
    vendor_id: str
    lines: list[QuotationLine]
    attached_at: datetime

    def total(self) -> int:
        return sum(line.quantity * line.unit_price for line in self.lines)


@dataclass
class ApprovalDecision:
    role: ApproverRole
    approver_name: str
    date: str
    status: str  # Approved | NotApproved
    reason: str = ""


@dataclass
class ProcurementRequest:
    id: str
    project_id: str
    requirement_doc: str
    quotations: list[Quotation] = field(default_factory=list)
    selected_vendor: str | None = None
    selection_justification: str = ""
    approvals: dict[ApproverRole, ApprovalDecision] = field(default_factory=dict)
    lop_closed: bool = False
    created_at: datetime | None = None

    def overall_status(self) -> str:
        if any(d.status == "NotApproved" for d in self.approvals.values()):
            return "NotApproved"
        if all(role in self.approvals for role in ALL_ROLES):
            return "Approved"
        return "Pending"


def coerce_category(value: str) -> DeviceCategory:
    try:
        return DeviceCategory(value)
    except ValueError:
        raise ValidationFailed(
            "bad-category", f"unknown device category {value!r}",
            {"valid": [c.value for c in DeviceCategory]},
        )


def coerce_role(value: str) -> ApproverRole:
    try:
        return ApproverRole(value)
    except ValueError:
        raise ValidationFailed(
            "bad-role", f"unknown approver role {value!r}", {"valid": [r.value for r in ApproverRole]}
        )


def get_vendor(state: "EngineState", vendor_id: str) -> Vendor:
    vendor = state.vendors.get(vendor_id)
    if vendor is None:
        raise NotFound("vendor-not-found", f"no vendor {vendor_id}")
    return vendor


def get_request(state: "EngineState", request_id: str) -> ProcurementRequest:
    request = state.procurements.get(request_id)
    if request is None:
        raise NotFound("procurement-not-found", f"no procurement request {request_id}")
    return request


# ----------------------------------------------------------------- CSV I/O

def _minor_units(text: str) -> int:
    try:
        amount = Decimal(text.strip())
    except InvalidOperation:
        raise ValidationFailed("bad-price", f"unparseable price {text!r}")
    minor = amount.scaleb(2)
    if minor != minor.to_integral_value():
        raise ValidationFailed("bad-price", f"price {text!r} has more than 2 decimal places")
    return int(minor)


def format_price(minor: int) -> str:
    return f"{Decimal(minor).scaleb(-2):.2f}"


def parse_quotation_csv(text: str) -> list[QuotationLine]:
    """Parse a procurement sheet; the header row must match the sheet verbatim."""
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if any(cell.strip() for cell in row)]
    if not rows:
        raise ValidationFailed("empty-csv", "quotation CSV has no rows")
    if rows[0] != CSV_HEADER:
        raise ValidationFailed(
            "bad-csv-header",
            "quotation CSV header does not match the procurement sheet",
            {"expected": CSV_HEADER, "got": rows[0]},
        )
    lines = []
    for row in rows[1:]:
        if len(row) != len(CSV_HEADER):
            raise ValidationFailed("bad-csv-row", f"expected {len(CSV_HEADER)} cells, got {len(row)}")
        cell = dict(zip(CSV_HEADER, row))
        try:
            serial = int(cell["Sl."])
            warranty = int(cell["Warranty"])
            quantity = int(cell["Quantity"])
        except ValueError as exc:
            raise ValidationFailed("bad-csv-row", f"non-numeric cell: {exc}")
        line = QuotationLine(
            serial=serial,
            device=cell["Device"],
            device_type=coerce_category(cell["Device Type"]),
            manufacturer=cell["Manufacturer"],
            purpose=cell["Propose"],
            warranty_months=warranty,
            vendor_id=cell["Vendor"],
            authorized_flag=cell["Authorized or not"].strip().lower() in ("yes", "true", "1"),
            vendor_contact=cell["Vendor contact no"],
            location=cell["Location"],
            quantity=quantity,
            unit_price=_minor_units(cell["Price (in RS)"]),
            quotation_person=cell["Quotation person"],
        )
        line.validate()
        lines.append(line)
    return lines


def render_quotation_csv(lines: list[QuotationLine]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for line in lines:
        writer.writerow([
            line.serial,
            line.device,
            line.device_type.value,
            line.manufacturer,
            line.purpose,
            line.warranty_months,
            line.vendor_id,
            "Yes" if line.authorized_flag else "No",
            line.vendor_contact,
            line.location,
            line.quantity,
            format_price(line.unit_price),
            line.quotation_person,
        ])
    return buf.getvalue()


def line_to_payload(line: QuotationLine) -> dict:
    payload = {f.name: getattr(line, f.name) for f in dc_fields(QuotationLine)}
    payload["device_type"] = line.device_type.value
    return payload


def line_from_payload(payload: dict) -> QuotationLine:
    data = dict(payload)
    data["device_type"] = DeviceCategory(data["device_type"])
    return QuotationLine(**data)


# ---------------------------------------------------------------- commands

def register_vendor(
    state: "EngineState", *, name: str, contact: str, authorized_for: list[DeviceCategory], ts: datetime
) -> list[EventDraft]:
    if not name.strip():
        raise ValidationFailed("empty-name", "vendor name must be non-empty")
    vid = state.next_id("vendor", "VND")
    payload = {
        "id": vid,
        "name": name.strip(),
        "contact": contact,
        "authorized_for": sorted(c.value for c in authorized_for),
        "at": iso(ts),
    }
    return [EventDraft("vendor", vid, "vendor_registered", payload)]


def submit_requirement(
    state: "EngineState", *, project_id: str, requirement_doc: str, ts: datetime
) -> list[EventDraft]:
    project = lifecycle.get_project(state, project_id)
    if not requirement_doc.strip():
        raise ValidationFailed("missing-doc-ref", "requirement document reference is required")
    if project.current_phase != lifecycle.Phase.Strategy:
        raise RuleViolation(
            "wrong-phase",
            f"procurement starts in Strategy; project is in {project.current_phase.value}",
        )
    rid = state.next_id("procurement", "PRQ")
    payload = {"id": rid, "project_id": project_id, "requirement_doc": requirement_doc, "at": iso(ts)}
    return [EventDraft("procurement", rid, "procurement_submitted", payload)]


def _frozen_by_approval(request: ProcurementRequest) -> None:
    if request.approvals:
        raise StateConflict(
            "quotations-frozen",
            f"request {request.id} already has approval decisions; quotations are frozen",
        )


def attach_quotation(
    state: "EngineState",
    *,
    request_id: str,
    vendor_id: str,
    lines: list[QuotationLine],
    ts: datetime,
    sink: notifications.NotificationSink,
) -> list[EventDraft]:
    request = get_request(state, request_id)
    vendor = get_vendor(state, vendor_id)
    if request.lop_closed:
        raise StateConflict("lop-closed", f"request {request_id} is closed")
    _frozen_by_approval(request)
    if not lines:
        raise ValidationFailed("empty-quotation", "a quotation needs at least one line")
    for line in lines:
        line.validate()
        if not vendor.authorized(line.device_type):
            raise RuleViolation(
                "vendor-not-authorized",
                f"vendor {vendor_id} is not an authorized dealer for {line.device_type.value}",
                {"category": line.device_type.value},
            )
        # the sheet's authorization column mirrors the registry check just made
        line.vendor_id = vendor_id
        line.authorized_flag = True
        if not line.vendor_contact:
            line.vendor_contact = vendor.contact
    drafts = [
        EventDraft(
            "procurement",
            request_id,
            "quotation_attached",
            {
                "request_id": request_id,
                "vendor_id": vendor_id,
                "lines": [line_to_payload(line) for line in lines],
                "at": iso(ts),
            },
        )
    ]
    notifications.emit_notification(
        state,
        drafts,
        kind=notifications.NotificationKind.QuotationReceived,
        entity_id=request_id,
        audience=[f"vendor:{vendor_id}"],
        body=f"Quotation received for {request_id} from vendor {vendor_id} ({len(lines)} lines).",
        ts=ts,
        sink=sink,
    )
    return drafts


def select_vendor(
    state: "EngineState",
    config: "ServiceConfig",
    *,
    request_id: str,
    vendor_id: str,
    justification: str,
    ts: datetime,
) -> list[EventDraft]:
    request = get_request(state, request_id)
    if request.lop_closed:
        raise StateConflict("lop-closed", f"request {request_id} is closed")
    _frozen_by_approval(request)
    if len(request.quotations) < config.min_quotations:
        raise RuleViolation(
            "insufficient-competition",
            f"need quotations from at least {config.min_quotations} vendors before selection; "
            f"have {len(request.quotations)}",
            {"required": config.min_quotations, "have": len(request.quotations)},
        )
    if vendor_id not in {q.vendor_id for q in request.quotations}:
        raise ValidationFailed(
            "vendor-without-quotation", f"vendor {vendor_id} has no quotation on request {request_id}"
        )
    payload = {"request_id": request_id, "vendor_id": vendor_id, "justification": justification, "at": iso(ts)}
    return [EventDraft("procurement", request_id, "vendor_selected", payload)]


def record_approval(
    state: "EngineState",
    *,
    request_id: str,
    role: ApproverRole,
    approver_name: str,
    status: str,
    reason: str,
    date: str | None,
    ts: datetime,
) -> list[EventDraft]:
    request = get_request(state, request_id)
    if request.selected_vendor is None:
        raise StateConflict("no-vendor-selected", f"select a vendor on {request_id} before approvals")
    if role in request.approvals:
        raise StateConflict("role-already-decided", f"{role.value} already decided on {request_id}")
    if status not in ("Approved", "NotApproved"):
        raise ValidationFailed("bad-status", f"status must be Approved or NotApproved, got {status!r}")
    if status == "NotApproved" and not reason.strip():
        raise ValidationFailed("missing-reason", "NotApproved decisions require a reason")
    payload = {
        "request_id": request_id,
        "role": role.value,
        "approver_name": approver_name,
        "status": status,
        "reason": reason,
        "date": date or iso(ts)[:10],
        "at": iso(ts),
    }
    return [EventDraft("procurement", request_id, "approval_recorded", payload)]


def close_lop(
    state: "EngineState", *, request_id: str, actor: str, ts: datetime, sink: notifications.NotificationSink
) -> list[EventDraft]:
    request = get_request(state, request_id)
    if request.lop_closed:
        raise StateConflict("lop-already-closed", f"request {request_id} LOP is already closed")
    overall = request.overall_status()
    if overall != "Approved":
        missing = sorted(r.value for r in ALL_ROLES if r not in request.approvals)
        raise RuleViolation(
            "not-fully-approved",
            f"LOP closure needs all four approvals; overall status is {overall}",
            {"missing_roles": missing},
        )
    drafts = [
        EventDraft(
            "procurement",
            request_id,
            "lop_closed",
            {"request_id": request_id, "closed_by": actor, "at": iso(ts)},
        )
    ]
    # procurement closure feeds the Strategy gate while that gate is still open
    project = state.projects.get(request.project_id)
    if (
        project is not None
        and project.current_phase == lifecycle.Phase.Strategy
        and not project.gates[lifecycle.Phase.Strategy].closed
    ):
        drafts.append(
            EventDraft(
                "project",
                project.id,
                "evidence_submitted",
                {
                    "project_id": project.id,
                    "phase": lifecycle.Phase.Strategy.value,
                    "kind": "ProcurementClosure",
                    "doc_ref": request_id,
                    "at": iso(ts),
                },
            )
        )
    _emit_vendor_approval(state, drafts, request, ts, sink)
    return drafts


def _emit_vendor_approval(
    state: "EngineState",
    drafts: list[EventDraft],
    request: ProcurementRequest,
    ts: datetime,
    sink: notifications.NotificationSink,
) -> bool:
    return notifications.emit_notification(
        state,
        drafts,
        kind=notifications.NotificationKind.VendorApproval,
        entity_id=request.id,
        audience=[f"vendor:{request.selected_vendor}", "management", "finance"],
        body=(
            f"Procurement {request.id} approved by all management staff; "
            f"vendor {request.selected_vendor} selected. Marked to management and finance."
        ),
        ts=ts,
        sink=sink,
    )


def notify_vendor_approval(
    state: "EngineState", *, request_id: str, ts: datetime, sink: notifications.NotificationSink
) -> list[EventDraft]:
    request = get_request(state, request_id)
    if request.overall_status() != "Approved":
        raise StateConflict(
            "not-approved", f"request {request_id} is {request.overall_status()}; cannot notify vendor"
        )
    drafts: list[EventDraft] = []
    if not _emit_vendor_approval(state, drafts, request, ts, sink):
        raise StateConflict("already-notified", f"vendor already notified for {request_id}")
    return drafts


def record_vendor_ack(
    state: "EngineState", *, request_id: str, message: str, ts: datetime, sink: notifications.NotificationSink
) -> list[EventDraft]:
    request = get_request(state, request_id)
    if request.overall_status() != "Approved":
        raise StateConflict("not-approved", f"request {request_id} has no approval to acknowledge")
    if request_id in state.vendor_acks:
        # idempotent: the first acknowledgment timestamp is kept
        return []
    drafts = [
        EventDraft(
            "procurement",
            request_id,
            "vendor_ack_recorded",
            {"request_id": request_id, "message": message, "at": iso(ts)},
        )
    ]
    notifications.emit_notification(
        state,
        drafts,
        kind=notifications.NotificationKind.VendorAck,
        entity_id=request_id,
        audience=["management", "finance"],
        body=f"Vendor {request.selected_vendor} acknowledged the approval notice for {request_id}: {message}",
        ts=ts,
        sink=sink,
    )
    return drafts


# ---------------------------------------------------------------- appliers

def _apply_vendor_registered(state: "EngineState", payload: dict) -> None:
    vendor = Vendor(
        id=payload["id"],
        name=payload["name"],
        contact=payload["contact"],
        authorized_for={DeviceCategory(c) for c in payload["authorized_for"]},
    )
    state.vendors[vendor.id] = vendor
    state.bump_counter("vendor", vendor.id, "VND")


def _apply_procurement_submitted(state: "EngineState", payload: dict) -> None:
    request = ProcurementRequest(
        id=payload["id"],
        project_id=payload["project_id"],
        requirement_doc=payload["requirement_doc"],
        created_at=parse_ts(payload["at"]),
    )
    state.procurements[request.id] = request
    state.bump_counter("procurement", request.id, "PRQ")


def _apply_quotation_attached(state: "EngineState", payload: dict) -> None:
    request = state.procurements[payload["request_id"]]
    request.quotations.append(
        Quotation(
            vendor_id=payload["vendor_id"],
            lines=[line_from_payload(p) for p in payload["lines"]],
            attached_at=parse_ts(payload["at"]),
        )
    )


def _apply_vendor_selected(state: "EngineState", payload: dict) -> None:
    request = state.procurements[payload["request_id"]]
    request.selected_vendor = payload["vendor_id"]
    request.selection_justification = payload["justification"]


def _apply_approval_recorded(state: "EngineState", payload: dict) -> None:
    request = state.procurements[payload["request_id"]]
    role = ApproverRole(payload["role"])
    request.approvals[role] = ApprovalDecision(
        role=role,
        approver_name=payload["approver_name"],
        date=payload["date"],
        status=payload["status"],
        reason=payload["reason"],
    )


def _apply_lop_closed(state: "EngineState", payload: dict) -> None:
    state.procurements[payload["request_id"]].lop_closed = True


def _apply_vendor_ack_recorded(state: "EngineState", payload: dict) -> None:
    state.vendor_acks[payload["request_id"]] = {"message": payload["message"], "at": payload["at"]}


APPLIERS = {
    "vendor_registered": _apply_vendor_registered,
    "procurement_submitted": _apply_procurement_submitted,
    "quotation_attached": _apply_quotation_attached,
    "vendor_selected": _apply_vendor_selected,
    "approval_recorded": _apply_approval_recorded,
    "lop_closed": _apply_lop_closed,
    "vendor_ack_recorded": _apply_vendor_ack_recorded,
}
