"""Change requests: CAB decision, copy routing, notice windows, dummy-input
test runs, timed release approval and the quarterly digest.

All window checks run against caller-supplied timestamps, never wall clock,
so the state machine is deterministic under test and replay.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING

from . import lifecycle, notifications
from .errors import NotFound, RuleViolation, StateConflict, ValidationFailed
from .events import EventDraft, iso, parse_ts
from .periods import Period

if TYPE_CHECKING:  # pragma: no cover
    from .state import EngineState

NORMAL_MIN_NOTICE = timedelta(hours=72)
EMERGENCY_MIN_NOTICE = timedelta(hours=24)
EMERGENCY_MAX_NOTICE = timedelta(hours=48)
RELEASE_MAX_DELAY = timedelta(hours=3)
RELEASE_WARN_DELAY = timedelta(hours=2)

COPY_TARGETS = ("Vendor", "ChangeAdvisory", "Finance")


class ChangeState(str, Enum):
    Draft = "Draft"
    CabApproved = "CabApproved"
    Scheduled = "Scheduled"
    Tested = "Tested"
    Released = "Released"
    Rejected = "Rejected"


class ChangeKind(str, Enum):
    Software = "Software"
    Hardware = "Hardware"


class ChangePriority(str, Enum):
    Normal = "Normal"
    Emergency = "Emergency"


class TestOutcome(str, Enum):
    Pass = "Pass"
    Fail = "Fail"


@dataclass
class TestRun:
    change_id: str
    dummy_input: str
    outcome: TestOutcome
    completed_at: datetime
    tester: str


@dataclass
class ChangeRequest:
    id: str
    project_id: str
    target: str
    kind: ChangeKind
    priority: ChangePriority
    downtime_estimate_minutes: int
    risk_note: str
    alternate_solution: str
    roi_justification: str
    affected_departments: list[str]
    vendor_id: str | None = None
    state: ChangeState = ChangeState.Draft
    scheduled_at: datetime | None = None
    copies_routed: list[str] = field(default_factory=list)
    cab_signoff: str | None = None
    rejection_reason: str | None = None
    released_at: datetime | None = None
    release_approver: str | None = None
    release_delay_warning: bool = False
    created_at: datetime | None = None


def get_change(state: "EngineState", change_id: str) -> ChangeRequest:
    change = state.changes.get(change_id)
    if change is None:
        raise NotFound("change-not-found", f"no change request {change_id}")
    return change


def last_pass(state: "EngineState", change_id: str) -> TestRun | None:
    passes = [r for r in state.test_runs.get(change_id, []) if r.outcome == TestOutcome.Pass]
    return passes[-1] if passes else None


def _require_state(change: ChangeRequest, expected: tuple[ChangeState, ...], action: str) -> None:
    if change.state not in expected:
        raise StateConflict(
            "wrong-change-state",
            f"cannot {action} change {change.id} in state {change.state.value}; "
            f"needs {' or '.join(s.value for s in expected)}",
        )


# ---------------------------------------------------------------- commands

def submit_change(
    state: "EngineState",
    *,
    project_id: str,
    target: str,
    kind: ChangeKind,
    priority: ChangePriority,
    downtime_estimate_minutes: int | None,
    risk_note: str,
    alternate_solution: str,
    roi_justification: str,
    affected_departments: list[str],
    vendor_id: str | None,
    ts: datetime,
) -> list[EventDraft]:
    lifecycle.get_project(state, project_id)
    missing = []
    if downtime_estimate_minutes is None:
        missing.append("downtime")
    if not risk_note.strip():
        missing.append("risk")
    if not alternate_solution.strip():
        missing.append("alternate")
    if not roi_justification.strip():
        missing.append("roi")
    if missing:
        raise ValidationFailed(
            "missing-criteria",
            f"change request is missing required criteria: {', '.join(missing)}",
            {"missing": missing},
        )
    if downtime_estimate_minutes < 0:
        raise ValidationFailed(
            "bad-downtime", f"downtime estimate must be >= 0 minutes, got {downtime_estimate_minutes}"
        )
    if not target.strip():
        raise ValidationFailed("empty-target", "change target must name an asset or application")
    if vendor_id and vendor_id not in state.vendors:
        raise NotFound("vendor-not-found", f"no vendor {vendor_id}")
    cid = state.next_id("change", "CHG")
    payload = {
        "id": cid,
        "project_id": project_id,
        "target": target,
        "kind": kind.value,
        "priority": priority.value,
        "downtime_estimate_minutes": downtime_estimate_minutes,
        "risk_note": risk_note,
        "alternate_solution": alternate_solution,
        "roi_justification": roi_justification,
        "affected_departments": sorted(set(affected_departments)),
        "vendor_id": vendor_id,
        "at": iso(ts),
    }
    return [EventDraft("change", cid, "change_submitted", payload)]


def cab_decide(
    state: "EngineState", *, change_id: str, approve: bool, head_signoff: str, reason: str, ts: datetime
) -> list[EventDraft]:
    change = get_change(state, change_id)
    _require_state(change, (ChangeState.Draft,), "decide")
    if not head_signoff.strip():
        raise ValidationFailed("missing-signoff", "CAB decisions need the advisory head's sign-off")
    if not approve and not reason.strip():
        raise ValidationFailed("missing-reason", "a rejection needs a reason")
    payload = {
        "id": change_id,
        "approved": approve,
        "head_signoff": head_signoff,
        "reason": reason,
        "copies_routed": list(COPY_TARGETS) if approve else [],
        "at": iso(ts),
    }
    return [EventDraft("change", change_id, "change_cab_decided", payload)]


def _window_error(priority: ChangePriority, notice: timedelta) -> RuleViolation:
    hours = notice.total_seconds() / 3600
    if priority == ChangePriority.Normal:
        required = "at least 72 hours of staff notice"
    else:
        required = "between 24 and 48 hours of notice"
    return RuleViolation(
        "schedule-window",
        f"{priority.value} changes require {required}; requested notice is {hours:.2f}h",
        {"priority": priority.value, "notice_hours": hours},
    )


def schedule_change(
    state: "EngineState",
    *,
    change_id: str,
    when: datetime,
    now: datetime,
    ts: datetime,
    sink: notifications.NotificationSink,
) -> list[EventDraft]:
    change = get_change(state, change_id)
    _require_state(change, (ChangeState.CabApproved,), "schedule")
    notice = when - now
    if change.priority == ChangePriority.Normal:
        if notice < NORMAL_MIN_NOTICE:
            raise _window_error(change.priority, notice)
    else:
        if not (EMERGENCY_MIN_NOTICE <= notice <= EMERGENCY_MAX_NOTICE):
            raise _window_error(change.priority, notice)
    if not change.affected_departments:
        raise ValidationFailed(
            "no-affected-departments", f"change {change_id} lists no departments to intimate"
        )
    drafts = [
        EventDraft(
            "change",
            change_id,
            "change_scheduled",
            {"id": change_id, "when": iso(when), "now": iso(now), "at": iso(ts)},
        )
    ]
    for dept in change.affected_departments:
        notifications.emit_notification(
            state,
            drafts,
            kind=notifications.NotificationKind.ChangeScheduled,
            entity_id=change_id,
            audience=[f"dept:{dept}"],
            body=(
                f"Change {change_id} on {change.target} is scheduled for {iso(when)}; "
                f"estimated downtime {change.downtime_estimate_minutes} minutes."
            ),
            ts=ts,
            sink=sink,
        )
    return drafts


def record_test_run(
    state: "EngineState",
    *,
    change_id: str,
    dummy_input: str,
    outcome: TestOutcome,
    at: datetime,
    tester: str,
    ts: datetime,
) -> list[EventDraft]:
    change = get_change(state, change_id)
    # Tested allows a fresh run after a stale-test rejection at release time
    _require_state(change, (ChangeState.Scheduled, ChangeState.Tested), "test")
    if not dummy_input.strip():
        raise ValidationFailed("empty-dummy-input", "a test run records the dummy input it used")
    payload = {
        "id": change_id,
        "dummy_input": dummy_input,
        "outcome": outcome.value,
        "completed_at": iso(at),
        "tester": tester,
        "at": iso(ts),
    }
    return [EventDraft("change", change_id, "change_test_run_recorded", payload)]


def approve_release(
    state: "EngineState",
    *,
    change_id: str,
    at: datetime,
    approver: str,
    ts: datetime,
    sink: notifications.NotificationSink,
) -> list[EventDraft]:
    change = get_change(state, change_id)
    _require_state(change, (ChangeState.Tested,), "release")
    latest = last_pass(state, change_id)
    if latest is None:  # unreachable through the state machine, kept as a guard
        raise StateConflict("no-passing-test", f"change {change_id} has no passing test run")
    delay = at - latest.completed_at
    if delay > RELEASE_MAX_DELAY:
        raise RuleViolation(
            "stale-test",
            f"release approval came {delay.total_seconds() / 3600:.2f}h after the last passing test; "
            "the limit is 3h — run a fresh test",
            {"hours_since_pass": delay.total_seconds() / 3600},
        )
    payload = {
        "id": change_id,
        "at": iso(at),
        "approver": approver,
        "delay_warning": delay > RELEASE_WARN_DELAY,
        "ts": iso(ts),
    }
    drafts = [EventDraft("change", change_id, "change_released", payload)]
    for dept in change.affected_departments:
        notifications.emit_notification(
            state,
            drafts,
            kind=notifications.NotificationKind.ChangeReleased,
            entity_id=change_id,
            audience=[f"dept:{dept}"],
            body=f"Change {change_id} is live; the change was made at {change.target}.",
            ts=ts,
            sink=sink,
        )
    return drafts


# ------------------------------------------------------------------ digest

def _digest_timestamp(change: ChangeRequest) -> datetime | None:
    return change.scheduled_at if change.scheduled_at is not None else change.created_at


def quarterly_change_digest(state: "EngineState", *, project_id: str, period: Period) -> dict:
    """Digest of every change in the period; a pure function of engine state."""
    lifecycle.get_project(state, project_id)
    entries = []
    first_pass_hits = 0
    tested_changes = 0
    for change in sorted(state.changes.values(), key=lambda c: c.id):
        if change.project_id != project_id:
            continue
        stamp = _digest_timestamp(change)
        if stamp is None or not period.contains(stamp):
            continue
        runs = state.test_runs.get(change.id, [])
        if runs:
            tested_changes += 1
            if runs[0].outcome == TestOutcome.Pass:
                first_pass_hits += 1
        bugs = [
            {"dummy_input": r.dummy_input, "at": iso(r.completed_at), "tester": r.tester}
            for r in runs
            if r.outcome == TestOutcome.Fail
        ]
        entries.append(
            {
                "change_id": change.id,
                "approver": change.release_approver or change.cab_signoff or "",
                "vendor": change.vendor_id or "",
                "area_of_change": change.target,
                "bugs": bugs,
                "solution": change.alternate_solution,
                "downtime_minutes": change.downtime_estimate_minutes,
                "departments_affected": list(change.affected_departments),
                "state": change.state.value,
            }
        )
    ratio = None if tested_changes == 0 else Fraction(first_pass_hits, tested_changes)
    return {
        "project_id": project_id,
        "period": period.label,
        "entries": entries,
        "change_count": len(entries),
        "first_pass_ratio": None if ratio is None else float(ratio),
    }


def render_digest_text(digest: dict) -> str:
    lines = [
        f"Change digest — project {digest['project_id']}, period {digest['period']}",
        f"Changes: {digest['change_count']}",
    ]
    if digest["first_pass_ratio"] is not None:
        lines.append(f"First-pass test ratio: {digest['first_pass_ratio']:.2%}")
    for e in digest["entries"]:
        lines.append("")
        lines.append(f"- {e['change_id']} [{e['state']}] area: {e['area_of_change']}")
        lines.append(f"  approver: {e['approver'] or '-'} | vendor: {e['vendor'] or '-'}")
        lines.append(f"  downtime: {e['downtime_minutes']} min | departments: {', '.join(e['departments_affected']) or '-'}")
        lines.append(f"  bugs: {len(e['bugs'])} | solution: {e['solution']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- appliers

def _apply_change_submitted(state: "EngineState", payload: dict) -> None:
    change = ChangeRequest(
        id=payload["id"],
        project_id=payload["project_id"],
        target=payload["target"],
        kind=ChangeKind(payload["kind"]),
        priority=ChangePriority(payload["priority"]),
        downtime_estimate_minutes=payload["downtime_estimate_minutes"],
        risk_note=payload["risk_note"],
        alternate_solution=payload["alternate_solution"],
        roi_justification=payload["roi_justification"],
        affected_departments=list(payload["affected_departments"]),
        vendor_id=payload["vendor_id"],
        created_at=parse_ts(payload["at"]),
    )
    state.changes[change.id] = change
    state.bump_counter("change", change.id, "CHG")


def _apply_change_cab_decided(state: "EngineState", payload: dict) -> None:
    change = state.changes[payload["id"]]
    change.cab_signoff = payload["head_signoff"]
    if payload["approved"]:
        change.state = ChangeState.CabApproved
        change.copies_routed = list(payload["copies_routed"])
    else:
        change.state = ChangeState.Rejected
        change.rejection_reason = payload["reason"]


def _apply_change_scheduled(state: "EngineState", payload: dict) -> None:
    change = state.changes[payload["id"]]
    change.state = ChangeState.Scheduled
    change.scheduled_at = parse_ts(payload["when"])


def _apply_change_test_run_recorded(state: "EngineState", payload: dict) -> None:
    change = state.changes[payload["id"]]
    run = TestRun(
        change_id=payload["id"],
        dummy_input=payload["dummy_input"],
        outcome=TestOutcome(payload["outcome"]),
        completed_at=parse_ts(payload["completed_at"]),
        tester=payload["tester"],
    )
    state.test_runs.setdefault(change.id, []).append(run)
    change.state = ChangeState.Tested if run.outcome == TestOutcome.Pass else ChangeState.Scheduled


def _apply_change_released(state: "EngineState", payload: dict) -> None:
    change = state.changes[payload["id"]]
    change.state = ChangeState.Released
    change.released_at = parse_ts(payload["at"])
    change.release_approver = payload["approver"]
    change.release_delay_warning = payload["delay_warning"]


APPLIERS = {
    "change_submitted": _apply_change_submitted,
    "change_cab_decided": _apply_change_cab_decided,
    "change_scheduled": _apply_change_scheduled,
    "change_test_run_recorded": _apply_change_test_run_recorded,
    "change_released": _apply_change_released,
}
