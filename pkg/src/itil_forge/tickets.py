"""Incident tickets: apl/hrd ids, L1-to-Expert escalation, knowledge base.

Ticket ids are per-category sequential with no gaps and never recycled;
running past 999999 is a hard error. The knowledge base keys on the
normalized issue text and keeps every attempt in order, failed ones
included.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum
from typing import TYPE_CHECKING

from .errors import NotFound, StateConflict, ValidationFailed
from .events import EventDraft, iso, parse_ts

if TYPE_CHECKING:  # pragma: no cover
    from .state import EngineState

TICKET_ID_RE = re.compile(r"^(apl|hrd)[0-9]{6}$")
EXPERT_DEADLINE = timedelta(hours=1)
EXPERT_WARNING = timedelta(minutes=30)

CSV_FIELDS = [
    "Issue",
    "Username and IT tag no",
    "Root cause",
    "Risk Level",
    "Resolution",
    "Closure/approval",
]


class TicketCategory(str, Enum):
    Application = "Application"
    Hardware = "Hardware"


PREFIXES = {TicketCategory.Application: "apl", TicketCategory.Hardware: "hrd"}


class RiskLevel(str, Enum):
    Low = "Low"
    Medium = "Medium"
    High = "High"
    Critical = "Critical"


RISK_RANK = {RiskLevel.Low: 0, RiskLevel.Medium: 1, RiskLevel.High: 2, RiskLevel.Critical: 3}


class TicketScope(str, Enum):
    SingleUser = "SingleUser"
    Department = "Department"


class TicketState(str, Enum):
    Open = "Open"
    Analyzing = "Analyzing"
    Resolved = "Resolved"
    Escalated = "Escalated"
    Closed = "Closed"


class EscalationLevel(str, Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    Expert = "Expert"


LEVEL_RANK = {EscalationLevel.L1: 1, EscalationLevel.L2: 2, EscalationLevel.L3: 3, EscalationLevel.Expert: 4}


class Permanence(str, Enum):
    Permanent = "Permanent"
    Temporary = "Temporary"


class ClosureKind(str, Enum):
    Solved = "Solved"
    ProcurementApproved = "ProcurementApproved"


@dataclass
class Resolution:
    text: str
    permanence: Permanence


@dataclass
class Ticket:
    id: str
    category: TicketCategory
    issue: str
    username: str
    asset_tag: str
    risk_level: RiskLevel
    scope: TicketScope
    department: str | None
    opened_at: datetime
    state: TicketState = TicketState.Open
    root_cause: str | None = None
    escalation_level: EscalationLevel = EscalationLevel.L1
    escalation_reason: str | None = None
    escalation_deadline: datetime | None = None
    resolution: Resolution | None = None
    resolved_at: datetime | None = None
    resolution_minutes: float | None = None
    closed_at: datetime | None = None
    closure_kind: ClosureKind | None = None
    approval_ref: str | None = None

    def unresolved(self) -> bool:
        return self.state not in (TicketState.Resolved, TicketState.Closed)


@dataclass
class KnowledgeAttempt:
    text: str
    worked: bool
    at: datetime


@dataclass
class KnowledgeEntry:
    issue_signature: str
    attempts: list[KnowledgeAttempt] = field(default_factory=list)


def issue_signature(issue: str) -> str:
    return " ".join(issue.lower().split())


def get_ticket(state: "EngineState", ticket_id: str) -> Ticket:
    ticket = state.tickets.get(ticket_id)
    if ticket is None:
        raise NotFound("ticket-not-found", f"no ticket {ticket_id}")
    return ticket


def working_suggestion(state: "EngineState", issue: str) -> str | None:
    """Latest resolution that worked for this issue signature, if any."""
    entry = state.knowledge.get(issue_signature(issue))
    if entry is None:
        return None
    for attempt in reversed(entry.attempts):
        if attempt.worked:
            return attempt.text
    return None


def queue_sort_key(ticket: Ticket) -> tuple:
    # department scope outranks single-user at equal risk; then risk, then age
    return (
        0 if ticket.scope == TicketScope.Department else 1,
        -RISK_RANK[ticket.risk_level],
        ticket.opened_at,
        ticket.id,
    )


def _require_state(ticket: Ticket, expected: tuple[TicketState, ...], action: str) -> None:
    if ticket.state not in expected:
        raise StateConflict(
            "wrong-ticket-state",
            f"cannot {action} ticket {ticket.id} in state {ticket.state.value}; "
            f"needs {' or '.join(s.value for s in expected)}",
        )


# ---------------------------------------------------------------- commands

def open_ticket(
    state: "EngineState",
    *,
    category: TicketCategory,
    issue: str,
    username: str,
    asset_tag: str,
    risk_level: RiskLevel,
    scope: TicketScope,
    department: str | None,
    ts: datetime,
) -> list[EventDraft]:
    if asset_tag not in state.assets:
        raise NotFound("asset-not-found", f"no asset {asset_tag}")
    if not issue.strip():
        raise ValidationFailed("empty-issue", "ticket issue must be non-empty")
    if not username.strip():
        raise ValidationFailed("empty-username", "ticket username must be non-empty")
    if scope == TicketScope.Department and not (department or "").strip():
        raise ValidationFailed("missing-department", "department scope requires a department name")
    prefix = PREFIXES[category]
    tid = state.next_id(f"ticket:{prefix}", prefix)
    payload = {
        "id": tid,
        "category": category.value,
        "issue": issue,
        "username": username,
        "asset_tag": asset_tag,
        "risk_level": risk_level.value,
        "scope": scope.value,
        "department": department if scope == TicketScope.Department else None,
        "opened_at": iso(ts),
    }
    return [EventDraft("ticket", tid, "ticket_opened", payload)]


def analyze(state: "EngineState", *, ticket_id: str, root_cause: str | None, ts: datetime) -> list[EventDraft]:
    ticket = get_ticket(state, ticket_id)
    _require_state(ticket, (TicketState.Open,), "analyze")
    payload = {
        "id": ticket_id,
        "root_cause": root_cause,
        "suggestion": working_suggestion(state, ticket.issue),
        "at": iso(ts),
    }
    return [EventDraft("ticket", ticket_id, "ticket_analyzed", payload)]


def record_attempt(state: "EngineState", *, ticket_id: str, text: str, ts: datetime) -> list[EventDraft]:
    ticket = get_ticket(state, ticket_id)
    _require_state(ticket, (TicketState.Analyzing, TicketState.Escalated), "record an attempt on")
    if not text.strip():
        raise ValidationFailed("empty-attempt", "attempt text must be non-empty")
    payload = {"id": ticket_id, "text": text, "at": iso(ts)}
    return [EventDraft("ticket", ticket_id, "ticket_attempt_recorded", payload)]


def resolve(
    state: "EngineState",
    *,
    ticket_id: str,
    resolution_text: str,
    permanence: Permanence,
    at: datetime,
    ts: datetime,
) -> list[EventDraft]:
    ticket = get_ticket(state, ticket_id)
    _require_state(ticket, (TicketState.Analyzing, TicketState.Escalated), "resolve")
    if not resolution_text.strip():
        raise ValidationFailed("empty-resolution", "resolution text must be non-empty")
    minutes = (at - ticket.opened_at).total_seconds() / 60
    payload = {
        "id": ticket_id,
        "resolution": resolution_text,
        "permanence": permanence.value,
        "at": iso(at),
        "minutes": minutes,
        "ts": iso(ts),
    }
    return [EventDraft("ticket", ticket_id, "ticket_resolved", payload)]


def escalate(
    state: "EngineState", *, ticket_id: str, to_level: EscalationLevel, reason: str, at: datetime, ts: datetime
) -> list[EventDraft]:
    ticket = get_ticket(state, ticket_id)
    _require_state(ticket, (TicketState.Analyzing, TicketState.Escalated), "escalate")
    if not reason.strip():
        raise ValidationFailed("missing-reason", "escalation needs a reason")
    current = ticket.escalation_level
    if LEVEL_RANK[to_level] <= LEVEL_RANK[current]:
        raise StateConflict(
            "non-increasing-level",
            f"ticket {ticket_id} is at {current.value}; escalation must go strictly higher than that",
        )
    if (
        to_level == EscalationLevel.Expert
        and current != EscalationLevel.L3
        and ticket.risk_level != RiskLevel.Critical
    ):
        raise StateConflict(
            "expert-requires-critical",
            f"only Critical tickets may jump straight to Expert; {ticket_id} is {ticket.risk_level.value}",
        )
    deadline = iso(at + EXPERT_DEADLINE) if to_level == EscalationLevel.Expert else None
    payload = {
        "id": ticket_id,
        "from_level": current.value,
        "to_level": to_level.value,
        "reason": reason,
        "at": iso(at),
        "deadline": deadline,
    }
    return [EventDraft("ticket", ticket_id, "ticket_escalated", payload)]


def check_escalation_breaches(state: "EngineState", *, now: datetime) -> list[Ticket]:
    """Expert-level tickets whose deadline has passed, still unresolved."""
    hits = [
        t
        for t in state.tickets.values()
        if t.state == TicketState.Escalated
        and t.escalation_level == EscalationLevel.Expert
        and t.escalation_deadline is not None
        and t.escalation_deadline < now
    ]
    return sorted(hits, key=lambda t: t.id)


def close_ticket(
    state: "EngineState",
    *,
    ticket_id: str,
    closure_kind: ClosureKind,
    approval_ref: str | None,
    at: datetime,
    ts: datetime,
) -> list[EventDraft]:
    ticket = get_ticket(state, ticket_id)
    if ticket.state == TicketState.Closed:
        raise StateConflict("already-closed", f"ticket {ticket_id} is already closed")
    if closure_kind == ClosureKind.Solved:
        _require_state(ticket, (TicketState.Resolved,), "close as Solved")
    else:
        if not (approval_ref or "").strip():
            raise ValidationFailed(
                "missing-approval-ref",
                "closing an unresolved ticket requires a procurement approval reference",
            )
    payload = {
        "id": ticket_id,
        "closure_kind": closure_kind.value,
        "approval_ref": approval_ref if closure_kind == ClosureKind.ProcurementApproved else None,
        "closed_at": iso(at),
        "ts": iso(ts),
    }
    return [EventDraft("ticket", ticket_id, "ticket_closed", payload)]


# ------------------------------------------------------------------ export

def render_tickets_csv(tickets: list[Ticket]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["Ticket"] + CSV_FIELDS)
    for t in tickets:
        resolution = f"{t.resolution.text} ({t.resolution.permanence.value})" if t.resolution else ""
        if t.closure_kind is None:
            closure = ""
        elif t.closure_kind == ClosureKind.ProcurementApproved:
            closure = f"ProcurementApproved ({t.approval_ref})"
        else:
            closure = "Solved"
        writer.writerow([
            t.id,
            t.issue,
            f"{t.username} / {t.asset_tag}",
            t.root_cause or "",
            t.risk_level.value,
            resolution,
            closure,
        ])
    return buf.getvalue()


# ---------------------------------------------------------------- appliers

def _apply_ticket_opened(state: "EngineState", payload: dict) -> None:
    ticket = Ticket(
        id=payload["id"],
        category=TicketCategory(payload["category"]),
        issue=payload["issue"],
        username=payload["username"],
        asset_tag=payload["asset_tag"],
        risk_level=RiskLevel(payload["risk_level"]),
        scope=TicketScope(payload["scope"]),
        department=payload["department"],
        opened_at=parse_ts(payload["opened_at"]),
    )
    state.tickets[ticket.id] = ticket
    prefix = PREFIXES[ticket.category]
    state.bump_counter(f"ticket:{prefix}", ticket.id, prefix)


def _apply_ticket_analyzed(state: "EngineState", payload: dict) -> None:
    ticket = state.tickets[payload["id"]]
    ticket.state = TicketState.Analyzing
    if payload["root_cause"]:
        ticket.root_cause = payload["root_cause"]


def _kb_append(state: "EngineState", issue: str, text: str, worked: bool, at: datetime) -> None:
    sig = issue_signature(issue)
    entry = state.knowledge.setdefault(sig, KnowledgeEntry(issue_signature=sig))
    entry.attempts.append(KnowledgeAttempt(text=text, worked=worked, at=at))


def _apply_ticket_attempt_recorded(state: "EngineState", payload: dict) -> None:
    ticket = state.tickets[payload["id"]]
    _kb_append(state, ticket.issue, payload["text"], False, parse_ts(payload["at"]))


def _apply_ticket_resolved(state: "EngineState", payload: dict) -> None:
    ticket = state.tickets[payload["id"]]
    ticket.state = TicketState.Resolved
    ticket.resolution = Resolution(text=payload["resolution"], permanence=Permanence(payload["permanence"]))
    ticket.resolved_at = parse_ts(payload["at"])
    ticket.resolution_minutes = payload["minutes"]
    ticket.escalation_deadline = None
    _kb_append(state, ticket.issue, payload["resolution"], True, parse_ts(payload["at"]))


def _apply_ticket_escalated(state: "EngineState", payload: dict) -> None:
    ticket = state.tickets[payload["id"]]
    ticket.state = TicketState.Escalated
    ticket.escalation_level = EscalationLevel(payload["to_level"])
    ticket.escalation_reason = payload["reason"]
    ticket.escalation_deadline = parse_ts(payload["deadline"]) if payload["deadline"] else None


def _apply_ticket_closed(state: "EngineState", payload: dict) -> None:
    ticket = state.tickets[payload["id"]]
    ticket.state = TicketState.Closed
    ticket.closure_kind = ClosureKind(payload["closure_kind"])
    ticket.approval_ref = payload["approval_ref"]
    ticket.closed_at = parse_ts(payload["closed_at"])


APPLIERS = {
    "ticket_opened": _apply_ticket_opened,
    "ticket_analyzed": _apply_ticket_analyzed,
    "ticket_attempt_recorded": _apply_ticket_attempt_recorded,
    "ticket_resolved": _apply_ticket_resolved,
    "ticket_escalated": _apply_ticket_escalated,
    "ticket_closed": _apply_ticket_closed,
}
