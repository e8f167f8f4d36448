"""Request bodies for the HTTP API.

Field presence and shape live here; domain rules (windows, gates, counters)
are enforced by the engine. Every mutation accepts an optional ``ts`` so
fixtures and tests can pin the audit timestamp.
"""

from __future__ import annotations

from datetime import date, datetime

from pydantic import BaseModel


class ProjectCreate(BaseModel):
    name: str
    organization: str
    ts: datetime | None = None


class EvidenceSubmit(BaseModel):
    phase: str
    kind: str
    doc_ref: str
    ts: datetime | None = None


class GateClose(BaseModel):
    ts: datetime | None = None


class VendorCreate(BaseModel):
    name: str
    contact: str = ""
    authorized_for: list[str] = []
    ts: datetime | None = None


class RequirementSubmit(BaseModel):
    project_id: str
    requirement_doc: str
    ts: datetime | None = None


class QuotationLineIn(BaseModel):
    serial: int
    device: str
    device_type: str
    manufacturer: str = ""
    purpose: str = ""
    warranty_months: int = 0
    vendor_contact: str = ""
    location: str = ""
    quantity: int
    unit_price: int
    quotation_person: str = ""


class QuotationAttach(BaseModel):
    vendor_id: str
    lines: list[QuotationLineIn]
    ts: datetime | None = None


class QuotationCsvImport(BaseModel):
    vendor_id: str
    csv: str
    ts: datetime | None = None


class VendorSelect(BaseModel):
    vendor_id: str
    justification: str = ""
    ts: datetime | None = None


class ApprovalRecord(BaseModel):
    role: str
    approver_name: str
    status: str
    reason: str = ""
    date: str | None = None
    ts: datetime | None = None


class VendorAck(BaseModel):
    message: str = ""
    ts: datetime | None = None


class AssetRegister(BaseModel):
    device: str
    category: str
    vendor_id: str = ""
    location: str = ""
    purchase_date: date
    warranty_months: int
    ts: datetime | None = None


class ServerDocIn(BaseModel):
    name: str
    configuration: str = ""
    operating_system: str = ""
    applications: list[str] = []
    antivirus: str = ""
    policies: list[str] = []
    dhcp_range: tuple[str, str] | None = None
    print_servers: list[str] = []
    ts: datetime | None = None


class LicensePoolCreate(BaseModel):
    product: str
    total: int
    ts: datetime | None = None


class LicenseAllocation(BaseModel):
    user: str
    asset_tag: str
    ts: datetime | None = None


class PortRegister(BaseModel):
    port_id: str
    kind: str
    location: str = ""
    notes: str = ""
    ts: datetime | None = None


class PortMark(BaseModel):
    status: str
    note: str = ""
    ts: datetime | None = None


class PowerPlanCreate(BaseModel):
    room: str
    measured_avg_load: float
    ts: datetime | None = None


class ChangeSubmit(BaseModel):
    project_id: str
    target: str
    kind: str
    priority: str = "Normal"
    downtime_estimate_minutes: int | None = None
    risk_note: str = ""
    alternate_solution: str = ""
    roi_justification: str = ""
    affected_departments: list[str] = []
    vendor_id: str | None = None
    ts: datetime | None = None


class CabDecision(BaseModel):
    approve: bool
    head_signoff: str
    reason: str = ""
    ts: datetime | None = None


class ChangeSchedule(BaseModel):
    when: datetime
    now: datetime | None = None
    ts: datetime | None = None


class TestRunRecord(BaseModel):
    dummy_input: str
    outcome: str
    tester: str = ""
    at: datetime | None = None
    ts: datetime | None = None


class ReleaseApprove(BaseModel):
    approver: str
    at: datetime | None = None
    ts: datetime | None = None


class TicketOpen(BaseModel):
    category: str
    issue: str
    username: str
    asset_tag: str
    risk_level: str
    scope: str
    department: str | None = None
    ts: datetime | None = None


class TicketAnalyze(BaseModel):
    root_cause: str | None = None
    ts: datetime | None = None


class TicketAttempt(BaseModel):
    text: str
    ts: datetime | None = None


class TicketResolve(BaseModel):
    resolution: str
    permanence: str
    at: datetime | None = None
    ts: datetime | None = None


class TicketEscalate(BaseModel):
    to_level: str
    reason: str
    at: datetime | None = None
    ts: datetime | None = None


class TicketClose(BaseModel):
    closure_kind: str
    approval_ref: str | None = None
    at: datetime | None = None
    ts: datetime | None = None


class SurveyRecord(BaseModel):
    period: str
    scores: list[int]
    ts: datetime | None = None


class RenewalEvaluate(BaseModel):
    year: int
    ts: datetime | None = None


class ServiceContacts(BaseModel):
    service: str
    users: list[str]
    ts: datetime | None = None


class OutageOpen(BaseModel):
    service: str
    start: datetime | None = None
    alternate_endpoint: str | None = None
    ts: datetime | None = None


class OutageClose(BaseModel):
    end: datetime | None = None
    now: datetime | None = None
    ts: datetime | None = None
