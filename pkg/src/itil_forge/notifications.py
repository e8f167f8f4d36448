"""Automated alerts plus the outage register that feeds downtime reporting.

Delivery goes through a pluggable sink (in-memory for tests, a JSON-lines
file in deployment); emission is idempotent per (kind, entity, recipient),
so re-triggering a flow never duplicates a message. Sinks are only invoked
on the live command path — replay rebuilds notification state without
re-delivering.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum
from typing import TYPE_CHECKING, Protocol

from .errors import NotFound, StateConflict, ValidationFailed
from .events import EventDraft, iso, parse_ts

if TYPE_CHECKING:  # pragma: no cover
    from .state import EngineState

logger = logging.getLogger(__name__)

OUTAGE_NOTICE_GRACE = timedelta(minutes=15)


class NotificationKind(str, Enum):
    ChangeScheduled = "ChangeScheduled"
    ChangeReleased = "ChangeReleased"
    VendorApproval = "VendorApproval"
    VendorAck = "VendorAck"
    QuotationReceived = "QuotationReceived"
    OutageStart = "OutageStart"
    OutageEnd = "OutageEnd"


@dataclass
class Notification:
    id: str
    kind: NotificationKind
    entity_id: str
    audience: list[str]
    body: str
    created_at: datetime
    delivered: bool
    late: bool = False


@dataclass
class OutageRecord:
    id: str
    service: str
    start: datetime
    end: datetime | None = None
    alternate_endpoint: str | None = None


class NotificationSink(Protocol):
    def deliver(self, recipient: str, subject: str, body: str) -> bool: ...


class MemorySink:
    """Collects deliveries in memory; always accepts."""

    def __init__(self) -> None:
        self.deliveries: list[tuple[str, str, str]] = []

    def deliver(self, recipient: str, subject: str, body: str) -> bool:
        self.deliveries.append((recipient, subject, body))
        return True


class FileSink:
    """Appends one JSON line per delivery."""

    def __init__(self, path: str):
        self.path = path

    def deliver(self, recipient: str, subject: str, body: str) -> bool:
        try:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps({"recipient": recipient, "subject": subject, "body": body}) + "\n")
            return True
        except OSError:
            logger.exception("notification delivery to %s failed", self.path)
            return False


def emit_notification(
    state: "EngineState",
    drafts: list[EventDraft],
    *,
    kind: NotificationKind,
    entity_id: str,
    audience: list[str],
    body: str,
    ts: datetime,
    sink: NotificationSink,
    late: bool = False,
) -> bool:
    """Append a notification event for recipients not yet covered.

    Returns False when every recipient was already notified (idempotence per
    kind/entity/recipient). Delivery is attempted here, on the command path,
    and the outcome is frozen into the event so replay stays side-effect free.
    """
    if not audience:
        raise ValidationFailed("empty-audience", f"{kind.value} notification needs at least one recipient")
    if entity_id not in body:
        body = f"{body} [{entity_id}]"
    pending = [d for d in drafts if d.event_kind == "notification_emitted"]
    pending_keys = {
        (d.payload["kind"], d.payload["entity_id"], r) for d in pending for r in d.payload["audience"]
    }
    fresh = [
        r
        for r in audience
        if (kind.value, entity_id, r) not in state.notified_keys
        and (kind.value, entity_id, r) not in pending_keys
    ]
    if not fresh:
        return False
    subject = f"{kind.value}: {entity_id}"
    results = [sink.deliver(recipient, subject, body) for recipient in fresh]
    nid = state.next_id("notification", "NTF", reserve=len(pending))
    payload = {
        "id": nid,
        "kind": kind.value,
        "entity_id": entity_id,
        "audience": fresh,
        "body": body,
        "created_at": iso(ts),
        "delivered": all(results),
        "late": late,
    }
    drafts.append(EventDraft("notification", nid, "notification_emitted", payload))
    return True


# ---------------------------------------------------------------- commands

def register_service_contacts(state: "EngineState", *, service: str, users: list[str], ts: datetime) -> list[EventDraft]:
    if not service.strip():
        raise ValidationFailed("empty-service", "service name must be non-empty")
    if not users:
        raise ValidationFailed("empty-users", "register at least one contact")
    payload = {"service": service, "users": list(users), "at": iso(ts)}
    return [EventDraft("service", service, "service_contacts_registered", payload)]


def open_outage(
    state: "EngineState",
    *,
    service: str,
    start: datetime,
    alternate_endpoint: str | None,
    ts: datetime,
    sink: NotificationSink,
) -> list[EventDraft]:
    if service in state.open_outage_by_service:
        raise StateConflict("outage-already-open", f"service {service!r} already has an open outage")
    users = state.service_contacts.get(service, [])
    if not users:
        raise ValidationFailed(
            "no-registered-users", f"service {service!r} has no registered users to notify"
        )
    oid = state.next_id("outage", "OUT")
    payload = {
        "id": oid,
        "service": service,
        "start": iso(start),
        "alternate_endpoint": alternate_endpoint,
        "at": iso(ts),
    }
    body = f"Service {service} is down (outage {oid})."
    if alternate_endpoint:
        body += f" Use the alternate endpoint {alternate_endpoint} meanwhile."
    drafts = [EventDraft("outage", oid, "outage_opened", payload)]
    emit_notification(
        state,
        drafts,
        kind=NotificationKind.OutageStart,
        entity_id=oid,
        audience=users,
        body=body,
        ts=ts,
        sink=sink,
    )
    return drafts


def close_outage(
    state: "EngineState",
    *,
    service: str,
    end: datetime,
    now: datetime,
    ts: datetime,
    sink: NotificationSink,
) -> list[EventDraft]:
    oid = state.open_outage_by_service.get(service)
    if oid is None:
        raise NotFound("no-open-outage", f"service {service!r} has no open outage")
    outage = state.outages[oid]
    if end < outage.start:
        raise ValidationFailed(
            "end-before-start", f"outage end {iso(end)} precedes start {iso(outage.start)}"
        )
    late = (now - end) > OUTAGE_NOTICE_GRACE
    payload = {
        "id": oid,
        "service": service,
        "end": iso(end),
        "notified_at": iso(now),
        "late": late,
        "at": iso(ts),
    }
    body = f"Service {service} is restored (outage {oid})."
    if late:
        body += " Note: this restoration notice went out later than the 15-minute target."
    drafts = [EventDraft("outage", oid, "outage_closed", payload)]
    emit_notification(
        state,
        drafts,
        kind=NotificationKind.OutageEnd,
        entity_id=oid,
        audience=state.service_contacts.get(service, []),
        body=body,
        ts=ts,
        sink=sink,
        late=late,
    )
    return drafts


# ---------------------------------------------------------------- appliers

def _apply_notification_emitted(state: "EngineState", payload: dict) -> None:
    note = Notification(
        id=payload["id"],
        kind=NotificationKind(payload["kind"]),
        entity_id=payload["entity_id"],
        audience=list(payload["audience"]),
        body=payload["body"],
        created_at=parse_ts(payload["created_at"]),
        delivered=payload["delivered"],
        late=payload.get("late", False),
    )
    state.notifications[note.id] = note
    for recipient in note.audience:
        state.notified_keys.add((note.kind.value, note.entity_id, recipient))
    state.bump_counter("notification", note.id, "NTF")


def _apply_service_contacts_registered(state: "EngineState", payload: dict) -> None:
    state.service_contacts[payload["service"]] = list(payload["users"])


def _apply_outage_opened(state: "EngineState", payload: dict) -> None:
    outage = OutageRecord(
        id=payload["id"],
        service=payload["service"],
        start=parse_ts(payload["start"]),
        alternate_endpoint=payload["alternate_endpoint"],
    )
    state.outages[outage.id] = outage
    state.open_outage_by_service[outage.service] = outage.id
    state.bump_counter("outage", outage.id, "OUT")


def _apply_outage_closed(state: "EngineState", payload: dict) -> None:
    outage = state.outages[payload["id"]]
    outage.end = parse_ts(payload["end"])
    state.open_outage_by_service.pop(outage.service, None)


APPLIERS = {
    "notification_emitted": _apply_notification_emitted,
    "service_contacts_registered": _apply_service_contacts_registered,
    "outage_opened": _apply_outage_opened,
    "outage_closed": _apply_outage_closed,
}
