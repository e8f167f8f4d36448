"""Response serializers: domain objects to wire dicts."""

from __future__ import annotations

from datetime import datetime

from ..assets import Asset, LicensePool, PortRecord, PowerPlan, ServerDoc
from ..changes import ChangeRequest, TestRun
from ..events import AuditEvent, iso
from ..lifecycle import PHASES, Project
from ..notifications import Notification, OutageRecord
from ..procurement import ApprovalDecision, ProcurementRequest, Quotation, QuotationLine, Vendor
from ..sla import AnnualReport, QuarterlyReport, RenewalDecision, SatisfactionSurvey
from ..tickets import EXPERT_WARNING, EXPERT_DEADLINE, Ticket


def _ts(value: datetime | None) -> str | None:
    return None if value is None else iso(value)


def project_view(project: Project) -> dict:
    return {
        "id": project.id,
        "name": project.name,
        "organization": project.organization,
        "current_phase": project.current_phase.value,
        "created_at": _ts(project.created_at),
        "gates": [
            {
                "phase": phase.value,
                "required_evidence": list(gate.required_evidence),
                "collected": [
                    {"kind": item.kind, "doc_ref": item.doc_ref, "at": _ts(item.at)}
                    for item in gate.collected
                ],
                "missing": gate.missing_kinds(),
                "closed": gate.closed,
                "closed_by": gate.closed_by,
            }
            for phase, gate in ((p, project.gates[p]) for p in PHASES)
        ],
    }


def vendor_view(vendor: Vendor) -> dict:
    return {
        "id": vendor.id,
        "name": vendor.name,
        "contact": vendor.contact,
        "authorized_for": sorted(c.value for c in vendor.authorized_for),
    }


def line_view(line: QuotationLine) -> dict:
    return {
        "serial": line.serial,
        "device": line.device,
        "device_type": line.device_type.value,
        "manufacturer": line.manufacturer,
        "purpose": line.purpose,
        "warranty_months": line.warranty_months,
        "vendor_id": line.vendor_id,
        "authorized_flag": line.authorized_flag,
        "vendor_contact": line.vendor_contact,
        "location": line.location,
        "quantity": line.quantity,
        "unit_price": line.unit_price,
        "quotation_person": line.quotation_person,
    }


def quotation_view(quotation: Quotation) -> dict:
    return {
        "vendor_id": quotation.vendor_id,
        "attached_at": _ts(quotation.attached_at),
        "total": quotation.total(),
        "lines": [line_view(line) for line in quotation.lines],
    }


def approval_view(decision: ApprovalDecision) -> dict:
    return {
        "role": decision.role.value,
        "approver_name": decision.approver_name,
        "date": decision.date,
        "status": decision.status,
        "reason": decision.reason,
    }


def procurement_view(request: ProcurementRequest, *, currency: str, ack: dict | None = None) -> dict:
    return {
        "id": request.id,
        "project_id": request.project_id,
        "requirement_doc": request.requirement_doc,
        "created_at": _ts(request.created_at),
        "currency": currency,
        "quotations": [quotation_view(q) for q in request.quotations],
        "selected_vendor": request.selected_vendor,
        "selection_justification": request.selection_justification,
        "approvals": [approval_view(request.approvals[r]) for r in sorted(request.approvals, key=lambda r: r.value)],
        "overall_status": request.overall_status(),
        "lop_closed": request.lop_closed,
        "vendor_ack": ack,
    }


def asset_view(asset: Asset) -> dict:
    return {
        "tag": asset.tag,
        "device": asset.device,
        "category": asset.category.value,
        "vendor_id": asset.vendor_id,
        "location": asset.location,
        "purchase_date": asset.purchase_date.isoformat(),
        "warranty_months": asset.warranty_months,
        "status": asset.status.value,
    }


def pool_view(pool: LicensePool) -> dict:
    return {
        "product": pool.product,
        "total": pool.total,
        "allocated": len(pool.allocations),
        "available": pool.total - len(pool.allocations),
        "allocations": [
            {"user": user, "asset_tag": tag, "at": _ts(at)} for user, tag, at in pool.allocations
        ],
    }


def server_doc_view(doc: ServerDoc) -> dict:
    return {
        "version": doc.version,
        "name": doc.name,
        "configuration": doc.configuration,
        "operating_system": doc.operating_system,
        "applications": list(doc.applications),
        "antivirus": doc.antivirus,
        "policies": list(doc.policies),
        "dhcp_range": list(doc.dhcp_range) if doc.dhcp_range else None,
        "print_servers": list(doc.print_servers),
        "recorded_at": _ts(doc.recorded_at),
    }


def port_view(port: PortRecord) -> dict:
    return {
        "port_id": port.port_id,
        "kind": port.kind.value,
        "location": port.location,
        "status": port.status.value,
        "notes": port.notes,
    }


def power_view(plan: PowerPlan) -> dict:
    return {
        "room": plan.room,
        "measured_avg_load": plan.measured_avg_load,
        "allocated_load": plan.allocated_load,
        "approved": plan.approved,
    }


def test_run_view(run: TestRun) -> dict:
    return {
        "dummy_input": run.dummy_input,
        "outcome": run.outcome.value,
        "completed_at": _ts(run.completed_at),
        "tester": run.tester,
    }


def change_view(change: ChangeRequest, runs: list[TestRun]) -> dict:
    return {
        "id": change.id,
        "project_id": change.project_id,
        "target": change.target,
        "kind": change.kind.value,
        "priority": change.priority.value,
        "downtime_estimate_minutes": change.downtime_estimate_minutes,
        "risk_note": change.risk_note,
        "alternate_solution": change.alternate_solution,
        "roi_justification": change.roi_justification,
        "affected_departments": list(change.affected_departments),
        "vendor_id": change.vendor_id,
        "state": change.state.value,
        "scheduled_at": _ts(change.scheduled_at),
        "copies_routed": list(change.copies_routed),
        "cab_signoff": change.cab_signoff,
        "rejection_reason": change.rejection_reason,
        "released_at": _ts(change.released_at),
        "release_approver": change.release_approver,
        "release_delay_warning": change.release_delay_warning,
        "created_at": _ts(change.created_at),
        "test_runs": [test_run_view(r) for r in runs],
    }


def ticket_view(ticket: Ticket, *, suggestion: str | None = None) -> dict:
    warning_at = (
        ticket.escalation_deadline - (EXPERT_DEADLINE - EXPERT_WARNING)
        if ticket.escalation_deadline is not None
        else None
    )
    view = {
        "id": ticket.id,
        "category": ticket.category.value,
        "issue": ticket.issue,
        "username": ticket.username,
        "asset_tag": ticket.asset_tag,
        "root_cause": ticket.root_cause,
        "risk_level": ticket.risk_level.value,
        "scope": ticket.scope.value,
        "department": ticket.department,
        "state": ticket.state.value,
        "escalation_level": ticket.escalation_level.value,
        "escalation_reason": ticket.escalation_reason,
        "escalation_deadline": _ts(ticket.escalation_deadline),
        "escalation_warning_at": _ts(warning_at),
        "resolution": (
            {"text": ticket.resolution.text, "permanence": ticket.resolution.permanence.value}
            if ticket.resolution
            else None
        ),
        "opened_at": _ts(ticket.opened_at),
        "resolved_at": _ts(ticket.resolved_at),
        "resolution_minutes": ticket.resolution_minutes,
        "closed_at": _ts(ticket.closed_at),
        "closure_kind": ticket.closure_kind.value if ticket.closure_kind else None,
        "approval_ref": ticket.approval_ref,
    }
    if suggestion is not None:
        view["suggestion"] = suggestion
    return view


def notification_view(note: Notification) -> dict:
    return {
        "id": note.id,
        "kind": note.kind.value,
        "entity_id": note.entity_id,
        "audience": list(note.audience),
        "body": note.body,
        "created_at": _ts(note.created_at),
        "delivered": note.delivered,
        "late": note.late,
    }


def outage_view(outage: OutageRecord) -> dict:
    return {
        "id": outage.id,
        "service": outage.service,
        "start": _ts(outage.start),
        "end": _ts(outage.end),
        "alternate_endpoint": outage.alternate_endpoint,
        "open": outage.end is None,
    }


def quarterly_view(report: QuarterlyReport) -> dict:
    return {
        "vendor_id": report.vendor_id,
        "period": report.period,
        "total_tickets": report.total_tickets,
        "resolved": report.resolved,
        "resolution_pct": float(report.resolution_pct),
        "total_downtime_minutes": float(report.total_downtime_minutes),
        "permanent_fix_ratio": float(report.permanent_fix_ratio),
        "critical_handled": report.critical_handled,
        "critical_resolved": report.critical_resolved,
        "unresolved_reasons": report.unresolved_reasons,
    }


def annual_view(report: AnnualReport) -> dict:
    return {
        "vendor_id": report.vendor_id,
        "year": report.year,
        "total_tickets": report.total_tickets,
        "resolved": report.resolved,
        "resolution_pct": float(report.resolution_pct),
        "total_downtime_minutes": float(report.total_downtime_minutes),
        "min_quarter_resolution_pct": float(report.min_quarter_resolution_pct),
        "max_quarter_resolution_pct": float(report.max_quarter_resolution_pct),
        "min_quarter_downtime_minutes": float(report.min_quarter_downtime_minutes),
        "max_quarter_downtime_minutes": float(report.max_quarter_downtime_minutes),
        "quarters": list(report.quarters),
    }


def survey_view(survey: SatisfactionSurvey, vendor_id: str) -> dict:
    return {
        "vendor_id": vendor_id,
        "period": survey.period,
        "scores": list(survey.scores),
        "mean": float(survey.mean),
    }


def decision_view(decision: RenewalDecision) -> dict:
    return {
        "vendor_id": decision.vendor_id,
        "year": decision.year,
        "outcome": decision.outcome.value,
        "reasons": list(decision.reasons),
    }


def event_view(event: AuditEvent) -> dict:
    return {
        "seq": event.seq,
        "ts": event.ts,
        "actor": event.actor,
        "entity_type": event.entity_type,
        "entity_id": event.entity_id,
        "event_kind": event.event_kind,
        "payload": event.payload,
    }
