"""The engine: one serialized writer over the event log and in-memory state.

Commands validate against current state and produce an event batch; the
batch is made durable (single fsynced write) and then applied. Replay runs
the exact same appliers over the log, so a replayed engine is byte-identical
to the live one.
"""

from __future__ import annotations

import threading
from datetime import date, datetime
from fractions import Fraction

from . import assets, changes, lifecycle, notifications, procurement, sla, tickets
from .config import ServiceConfig
from .errors import NotFound, StateConflict, ValidationFailed
from .events import AuditEvent, EventDraft, EventLog, iso, now_utc, read_events
from .periods import parse_period, quarters_of
from .state import EngineState, dump_state


def _coerce(enum_cls, value: str):
    try:
        return enum_cls(value)
    except ValueError:
        raise ValidationFailed(
            "bad-value",
            f"{value!r} is not a valid {enum_cls.__name__}",
            {"valid": [e.value for e in enum_cls]},
        )


def _apply_survey_recorded(state: EngineState, payload: dict) -> None:
    survey = sla.SatisfactionSurvey(
        period=payload["period"],
        scores=list(payload["scores"]),
        mean=Fraction(sum(payload["scores"]), len(payload["scores"])),
    )
    state.surveys[f"{payload['vendor_id']}:{payload['period']}"] = survey


def _apply_renewal_evaluated(state: EngineState, payload: dict) -> None:
    decision = sla.RenewalDecision(
        vendor_id=payload["vendor_id"],
        year=payload["year"],
        outcome=sla.RenewalOutcome(payload["outcome"]),
        reasons=list(payload["reasons"]),
    )
    state.renewal_decisions[f"{payload['vendor_id']}:{payload['year']}"] = decision


APPLIERS = {
    **lifecycle.APPLIERS,
    **procurement.APPLIERS,
    **assets.APPLIERS,
    **changes.APPLIERS,
    **tickets.APPLIERS,
    **notifications.APPLIERS,
    "survey_recorded": _apply_survey_recorded,
    "renewal_evaluated": _apply_renewal_evaluated,
}


def make_sink(config: ServiceConfig) -> notifications.NotificationSink:
    if config.notification_sink == "file":
        return notifications.FileSink(config.notification_sink_path)
    return notifications.MemorySink()


class Engine:
    """All mutations pass through here, under one lock, onto one log."""

    def __init__(
        self,
        config: ServiceConfig | None = None,
        *,
        log_path: str | None = None,
        sink: notifications.NotificationSink | None = None,
    ):
        self.config = config or ServiceConfig()
        self.state = EngineState()
        self.lock = threading.RLock()
        self.sink = sink if sink is not None else make_sink(self.config)
        path = log_path if log_path is not None else self.config.log_path
        existing: list[AuditEvent] = []
        if path is not None:
            try:
                existing = list(read_events(path, recover_torn_tail=self.config.replay_recovery))
            except FileNotFoundError:
                existing = []
        self.log = EventLog(path)
        for event in existing:
            APPLIERS[event.event_kind](self.state, event.payload)
            self.log.note_replayed(event)

    @classmethod
    def replay_file(cls, path: str, config: ServiceConfig | None = None, *, recover: bool = False) -> "Engine":
        """Rebuild state from a log file without opening it for writing."""
        engine = cls(config, log_path=None)
        for event in read_events(path, recover_torn_tail=recover):
            APPLIERS[event.event_kind](engine.state, event.payload)
            engine.log.note_replayed(event)
        return engine

    def close(self) -> None:
        self.log.close()

    def dump(self) -> bytes:
        with self.lock:
            return dump_state(self.state)

    # ------------------------------------------------------------- commit

    def _commit(self, actor: str, ts: datetime, drafts: list[EventDraft]) -> None:
        if not drafts:
            return
        first, last = self.log.append_batch(actor, iso(ts), drafts)
        for event in self.log.events[first - 1 : last]:
            APPLIERS[event.event_kind](self.state, event.payload)

    # ---------------------------------------------------------- lifecycle

    def create_project(self, *, name: str, organization: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = lifecycle.create_project(self.state, self.config, name=name, organization=organization, ts=ts)
            self._commit(actor, ts, drafts)
            return self.state.projects[drafts[0].entity_id]

    def submit_evidence(
        self, *, project_id: str, phase: str, kind: str, doc_ref: str, actor: str, ts: datetime | None = None
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = lifecycle.submit_evidence(
                self.state,
                project_id=project_id,
                phase=lifecycle.coerce_phase(phase),
                kind=kind,
                doc_ref=doc_ref,
                ts=ts,
            )
            self._commit(actor, ts, drafts)
            return self.state.projects[project_id]

    def close_gate(self, *, project_id: str, phase: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = lifecycle.close_gate(
                self.state, project_id=project_id, phase=lifecycle.coerce_phase(phase), actor=actor, ts=ts
            )
            self._commit(actor, ts, drafts)
            return self.state.projects[project_id]

    def advance_phase(self, *, project_id: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = lifecycle.advance_phase(self.state, project_id=project_id, ts=ts)
            self._commit(actor, ts, drafts)
            return self.state.projects[project_id]

    def get_project(self, project_id: str):
        with self.lock:
            return lifecycle.get_project(self.state, project_id)

    # -------------------------------------------------------- procurement

    def register_vendor(
        self, *, name: str, contact: str, authorized_for: list[str], actor: str, ts: datetime | None = None
    ):
        with self.lock:
            ts = ts or now_utc()
            categories = [procurement.coerce_category(c) for c in authorized_for]
            drafts = procurement.register_vendor(
                self.state, name=name, contact=contact, authorized_for=categories, ts=ts
            )
            self._commit(actor, ts, drafts)
            return self.state.vendors[drafts[0].entity_id]

    def submit_requirement(self, *, project_id: str, requirement_doc: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = procurement.submit_requirement(
                self.state, project_id=project_id, requirement_doc=requirement_doc, ts=ts
            )
            self._commit(actor, ts, drafts)
            return self.state.procurements[drafts[0].entity_id]

    def attach_quotation(
        self,
        *,
        request_id: str,
        vendor_id: str,
        lines: list[procurement.QuotationLine],
        actor: str,
        ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = procurement.attach_quotation(
                self.state, request_id=request_id, vendor_id=vendor_id, lines=lines, ts=ts, sink=self.sink
            )
            self._commit(actor, ts, drafts)
            return self.state.procurements[request_id]

    def import_quotation_csv(
        self, *, request_id: str, vendor_id: str, csv_text: str, actor: str, ts: datetime | None = None
    ):
        lines = procurement.parse_quotation_csv(csv_text)
        return self.attach_quotation(
            request_id=request_id, vendor_id=vendor_id, lines=lines, actor=actor, ts=ts
        )

    def select_vendor(
        self, *, request_id: str, vendor_id: str, justification: str, actor: str, ts: datetime | None = None
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = procurement.select_vendor(
                self.state, self.config, request_id=request_id, vendor_id=vendor_id,
                justification=justification, ts=ts,
            )
            self._commit(actor, ts, drafts)
            return self.state.procurements[request_id]

    def record_approval(
        self,
        *,
        request_id: str,
        role: str,
        approver_name: str,
        status: str,
        reason: str = "",
        date_str: str | None = None,
        actor: str,
        ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = procurement.record_approval(
                self.state,
                request_id=request_id,
                role=procurement.coerce_role(role),
                approver_name=approver_name,
                status=status,
                reason=reason,
                date=date_str,
                ts=ts,
            )
            self._commit(actor, ts, drafts)
            return self.state.procurements[request_id]

    def close_lop(self, *, request_id: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = procurement.close_lop(self.state, request_id=request_id, actor=actor, ts=ts, sink=self.sink)
            self._commit(actor, ts, drafts)
            return self.state.procurements[request_id]

    def notify_vendor_approval(self, *, request_id: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = procurement.notify_vendor_approval(self.state, request_id=request_id, ts=ts, sink=self.sink)
            self._commit(actor, ts, drafts)
            return self.state.notifications[drafts[0].entity_id]

    def record_vendor_ack(self, *, request_id: str, message: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = procurement.record_vendor_ack(
                self.state, request_id=request_id, message=message, ts=ts, sink=self.sink
            )
            self._commit(actor, ts, drafts)
            return self.state.vendor_acks[request_id]

    def get_procurement(self, request_id: str):
        with self.lock:
            return procurement.get_request(self.state, request_id)

    # -------------------------------------------------------------- assets

    def register_asset(
        self,
        *,
        device: str,
        category: str,
        vendor_id: str,
        location: str,
        purchase_date: date,
        warranty_months: int,
        actor: str,
        ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = assets.register_asset(
                self.state,
                device=device,
                category=procurement.coerce_category(category),
                vendor_id=vendor_id,
                location=location,
                purchase_date=purchase_date,
                warranty_months=warranty_months,
                ts=ts,
            )
            self._commit(actor, ts, drafts)
            return self.state.assets[drafts[0].entity_id]

    def retire_asset(self, *, tag: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = assets.retire_asset(self.state, tag=tag, ts=ts)
            self._commit(actor, ts, drafts)
            return self.state.assets[tag]

    def warranty_status(self, *, tag: str, on_date: date) -> assets.WarrantyStatus:
        with self.lock:
            return assets.warranty_status(assets.get_asset(self.state, tag), on_date)

    def create_license_pool(self, *, product: str, total: int, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = assets.create_license_pool(self.state, product=product, total=total, ts=ts)
            self._commit(actor, ts, drafts)
            return self.state.license_pools[product]

    def allocate_license(self, *, product: str, user: str, asset_tag: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = assets.allocate_license(self.state, product=product, user=user, asset_tag=asset_tag, ts=ts)
            self._commit(actor, ts, drafts)
            return self.state.license_pools[product]

    def release_license(self, *, product: str, user: str, asset_tag: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = assets.release_license(self.state, product=product, user=user, asset_tag=asset_tag, ts=ts)
            self._commit(actor, ts, drafts)
            return self.state.license_pools[product]

    def record_server_doc(self, *, asset_tag: str, actor: str, ts: datetime | None = None, **doc_fields):
        with self.lock:
            ts = ts or now_utc()
            drafts = assets.record_server_doc(self.state, asset_tag=asset_tag, ts=ts, **doc_fields)
            self._commit(actor, ts, drafts)
            return self.state.server_docs[asset_tag][-1]

    def register_port(
        self, *, port_id: str, kind: str, location: str, notes: str = "", actor: str, ts: datetime | None = None
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = assets.register_port(
                self.state, port_id=port_id, kind=_coerce(assets.PortKind, kind), location=location,
                notes=notes, ts=ts,
            )
            self._commit(actor, ts, drafts)
            return self.state.ports[port_id]

    def mark_port(self, *, port_id: str, status: str, note: str = "", actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = assets.mark_port(
                self.state, port_id=port_id, status=_coerce(assets.PortStatus, status), note=note, ts=ts
            )
            self._commit(actor, ts, drafts)
            return self.state.ports[port_id]

    def plan_power(self, *, room: str, measured_avg_load: float, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = assets.plan_power(self.state, room=room, measured_avg_load=measured_avg_load, ts=ts)
            self._commit(actor, ts, drafts)
            return self.state.power_plans[room]

    def approve_power_plan(self, *, room: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = assets.approve_power_plan(self.state, room=room, ts=ts)
            self._commit(actor, ts, drafts)
            return self.state.power_plans[room]

    # ------------------------------------------------------------- changes

    def submit_change(
        self,
        *,
        project_id: str,
        target: str,
        kind: str,
        priority: str,
        downtime_estimate_minutes: int | None,
        risk_note: str,
        alternate_solution: str,
        roi_justification: str,
        affected_departments: list[str],
        vendor_id: str | None = None,
        actor: str,
        ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = changes.submit_change(
                self.state,
                project_id=project_id,
                target=target,
                kind=_coerce(changes.ChangeKind, kind),
                priority=_coerce(changes.ChangePriority, priority),
                downtime_estimate_minutes=downtime_estimate_minutes,
                risk_note=risk_note,
                alternate_solution=alternate_solution,
                roi_justification=roi_justification,
                affected_departments=affected_departments,
                vendor_id=vendor_id,
                ts=ts,
            )
            self._commit(actor, ts, drafts)
            return self.state.changes[drafts[0].entity_id]

    def cab_decide(
        self, *, change_id: str, approve: bool, head_signoff: str, reason: str = "", actor: str,
        ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = changes.cab_decide(
                self.state, change_id=change_id, approve=approve, head_signoff=head_signoff, reason=reason, ts=ts
            )
            self._commit(actor, ts, drafts)
            return self.state.changes[change_id]

    def schedule_change(
        self, *, change_id: str, when: datetime, now: datetime | None = None, actor: str,
        ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = changes.schedule_change(
                self.state, change_id=change_id, when=when, now=now or ts, ts=ts, sink=self.sink
            )
            self._commit(actor, ts, drafts)
            return self.state.changes[change_id]

    def record_test_run(
        self, *, change_id: str, dummy_input: str, outcome: str, at: datetime | None = None, tester: str,
        actor: str, ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = changes.record_test_run(
                self.state,
                change_id=change_id,
                dummy_input=dummy_input,
                outcome=_coerce(changes.TestOutcome, outcome),
                at=at or ts,
                tester=tester,
                ts=ts,
            )
            self._commit(actor, ts, drafts)
            return self.state.changes[change_id]

    def approve_release(
        self, *, change_id: str, at: datetime | None = None, approver: str, actor: str,
        ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = changes.approve_release(
                self.state, change_id=change_id, at=at or ts, approver=approver, ts=ts, sink=self.sink
            )
            self._commit(actor, ts, drafts)
            return self.state.changes[change_id]

    def get_change(self, change_id: str):
        with self.lock:
            return changes.get_change(self.state, change_id)

    def change_digest(self, *, project_id: str, period: str) -> dict:
        with self.lock:
            return changes.quarterly_change_digest(
                self.state, project_id=project_id, period=parse_period(period)
            )

    # ------------------------------------------------------------- tickets

    def open_ticket(
        self,
        *,
        category: str,
        issue: str,
        username: str,
        asset_tag: str,
        risk_level: str,
        scope: str,
        department: str | None = None,
        actor: str,
        ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = tickets.open_ticket(
                self.state,
                category=_coerce(tickets.TicketCategory, category),
                issue=issue,
                username=username,
                asset_tag=asset_tag,
                risk_level=_coerce(tickets.RiskLevel, risk_level),
                scope=_coerce(tickets.TicketScope, scope),
                department=department,
                ts=ts,
            )
            self._commit(actor, ts, drafts)
            return self.state.tickets[drafts[0].entity_id]

    def analyze_ticket(self, *, ticket_id: str, root_cause: str | None = None, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = tickets.analyze(self.state, ticket_id=ticket_id, root_cause=root_cause, ts=ts)
            self._commit(actor, ts, drafts)
            return self.state.tickets[ticket_id], drafts[0].payload["suggestion"]

    def record_attempt(self, *, ticket_id: str, text: str, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = tickets.record_attempt(self.state, ticket_id=ticket_id, text=text, ts=ts)
            self._commit(actor, ts, drafts)
            return self.state.tickets[ticket_id]

    def resolve_ticket(
        self, *, ticket_id: str, resolution: str, permanence: str, at: datetime | None = None, actor: str,
        ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = tickets.resolve(
                self.state,
                ticket_id=ticket_id,
                resolution_text=resolution,
                permanence=_coerce(tickets.Permanence, permanence),
                at=at or ts,
                ts=ts,
            )
            self._commit(actor, ts, drafts)
            return self.state.tickets[ticket_id]

    def escalate_ticket(
        self, *, ticket_id: str, to_level: str, reason: str, at: datetime | None = None, actor: str,
        ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = tickets.escalate(
                self.state,
                ticket_id=ticket_id,
                to_level=_coerce(tickets.EscalationLevel, to_level),
                reason=reason,
                at=at or ts,
                ts=ts,
            )
            self._commit(actor, ts, drafts)
            return self.state.tickets[ticket_id]

    def close_ticket(
        self, *, ticket_id: str, closure_kind: str, approval_ref: str | None = None,
        at: datetime | None = None, actor: str, ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = tickets.close_ticket(
                self.state,
                ticket_id=ticket_id,
                closure_kind=_coerce(tickets.ClosureKind, closure_kind),
                approval_ref=approval_ref,
                at=at or ts,
                ts=ts,
            )
            self._commit(actor, ts, drafts)
            return self.state.tickets[ticket_id]

    def get_ticket(self, ticket_id: str):
        with self.lock:
            return tickets.get_ticket(self.state, ticket_id)

    def ticket_queue(self) -> list:
        with self.lock:
            open_states = (tickets.TicketState.Open, tickets.TicketState.Analyzing, tickets.TicketState.Escalated)
            queue = [t for t in self.state.tickets.values() if t.state in open_states]
            return sorted(queue, key=tickets.queue_sort_key)

    def escalation_breaches(self, *, now: datetime) -> list:
        with self.lock:
            return tickets.check_escalation_breaches(self.state, now=now)

    # ----------------------------------------------------------------- sla

    def _vendor_tickets(self, vendor_id: str) -> list:
        return [
            t
            for t in self.state.tickets.values()
            if self.state.assets[t.asset_tag].vendor_id == vendor_id
        ]

    def _closed_outages(self) -> list:
        return [o for o in self.state.outages.values() if o.end is not None]

    def vendor_quarterly_report(self, *, vendor_id: str, period: str) -> sla.QuarterlyReport:
        with self.lock:
            procurement.get_vendor(self.state, vendor_id)
            return sla.build_quarterly_report(
                vendor_id, parse_period(period), self._vendor_tickets(vendor_id), self._closed_outages()
            )

    def vendor_annual_report(self, *, vendor_id: str, year: int) -> sla.AnnualReport:
        with self.lock:
            procurement.get_vendor(self.state, vendor_id)
            vendor_tickets = self._vendor_tickets(vendor_id)
            outages = self._closed_outages()
            reports = [
                sla.build_quarterly_report(vendor_id, q, vendor_tickets, outages)
                for q in quarters_of(year)
            ]
            return sla.consolidate_annual(reports)

    def record_survey(self, *, vendor_id: str, period: str, scores: list[int], actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            procurement.get_vendor(self.state, vendor_id)
            survey = sla.make_survey(period, scores)
            key = f"{vendor_id}:{survey.period}"
            if key in self.state.surveys:
                raise StateConflict("survey-exists", f"survey for {vendor_id} period {period} already recorded")
            payload = {"vendor_id": vendor_id, "period": survey.period, "scores": survey.scores, "at": iso(ts)}
            self._commit(actor, ts, [EventDraft("survey", key, "survey_recorded", payload)])
            return self.state.surveys[key]

    def _year_survey(self, vendor_id: str, year: int) -> sla.SatisfactionSurvey:
        scores: list[int] = []
        for key in sorted(self.state.surveys):
            survey = self.state.surveys[key]
            if key.startswith(f"{vendor_id}:") and parse_period(survey.period).year == year:
                scores.extend(survey.scores)
        if not scores:
            raise NotFound("no-survey", f"no satisfaction survey recorded for {vendor_id} in {year}")
        return sla.SatisfactionSurvey(period=str(year), scores=scores, mean=Fraction(sum(scores), len(scores)))

    def evaluate_renewal(self, *, vendor_id: str, year: int, actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            annual = self.vendor_annual_report(vendor_id=vendor_id, year=year)
            survey = self._year_survey(vendor_id, year)
            decision = sla.evaluate_renewal(annual, survey, self.config.sla)
            payload = {
                "vendor_id": vendor_id,
                "year": year,
                "outcome": decision.outcome.value,
                "reasons": decision.reasons,
                "at": iso(ts),
            }
            self._commit(actor, ts, [EventDraft("vendor", vendor_id, "renewal_evaluated", payload)])
            return decision

    # ------------------------------------------------ notifications/outages

    def register_service_contacts(self, *, service: str, users: list[str], actor: str, ts: datetime | None = None):
        with self.lock:
            ts = ts or now_utc()
            drafts = notifications.register_service_contacts(self.state, service=service, users=users, ts=ts)
            self._commit(actor, ts, drafts)
            return self.state.service_contacts[service]

    def open_outage(
        self, *, service: str, start: datetime | None = None, alternate_endpoint: str | None = None,
        actor: str, ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = notifications.open_outage(
                self.state, service=service, start=start or ts, alternate_endpoint=alternate_endpoint,
                ts=ts, sink=self.sink,
            )
            self._commit(actor, ts, drafts)
            return self.state.outages[drafts[0].entity_id]

    def close_outage(
        self, *, service: str, end: datetime | None = None, now: datetime | None = None,
        actor: str, ts: datetime | None = None,
    ):
        with self.lock:
            ts = ts or now_utc()
            drafts = notifications.close_outage(
                self.state, service=service, end=end or ts, now=now or ts, ts=ts, sink=self.sink
            )
            self._commit(actor, ts, drafts)
            return self.state.outages[drafts[0].entity_id]

    # --------------------------------------------------------------- reads

    def events_view(self, *, since_seq: int = 0, limit: int | None = None) -> list[AuditEvent]:
        with self.lock:
            selected = [e for e in self.log.events if e.seq > since_seq]
            return selected[:limit] if limit is not None else selected
