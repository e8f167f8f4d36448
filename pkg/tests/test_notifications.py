from datetime import timedelta

import pytest

from itil_forge import Engine
from itil_forge.errors import NotFound, StateConflict, ValidationFailed
from itil_forge.notifications import FileSink, MemorySink, NotificationKind
from itil_forge.sla import compute_downtime
from itil_forge.periods import parse_period

from conftest import T0, at


@pytest.fixture
def sink():
    return MemorySink()


@pytest.fixture
def engine(sink):
    return Engine(log_path=None, sink=sink)


@pytest.fixture
def netbanking(engine):
    engine.register_service_contacts(
        service="netbanking", users=["+91-98-1", "+91-98-2", "+91-98-3"], actor="admin", ts=T0
    )
    return "netbanking"


def test_open_outage_notifies_all_registered_users(engine, sink, netbanking):
    outage = engine.open_outage(
        service=netbanking, start=at(minutes=5), alternate_endpoint="alt.example",
        actor="noc", ts=at(minutes=5),
    )
    starts = [n for n in engine.state.notifications.values() if n.kind == NotificationKind.OutageStart]
    assert len(starts) == 1
    assert starts[0].audience == ["+91-98-1", "+91-98-2", "+91-98-3"]
    assert "alt.example" in starts[0].body
    assert outage.id in starts[0].body
    assert len(sink.deliveries) == 3
    assert starts[0].delivered


def test_second_open_outage_for_service_rejected(engine, netbanking):
    engine.open_outage(service=netbanking, start=T0, actor="noc", ts=T0)
    with pytest.raises(StateConflict):
        engine.open_outage(service=netbanking, start=at(minutes=1), actor="noc", ts=at(minutes=1))


def test_outage_without_registered_users_rejected(engine):
    with pytest.raises(ValidationFailed) as err:
        engine.open_outage(service="erp", start=T0, actor="noc", ts=T0)
    assert err.value.code == "no-registered-users"


def test_close_outage_on_time(engine, netbanking):
    engine.open_outage(service=netbanking, start=T0, actor="noc", ts=T0)
    end = at(minutes=40)
    outage = engine.close_outage(service=netbanking, end=end, now=end + timedelta(minutes=5),
                                 actor="noc", ts=end + timedelta(minutes=5))
    ends = [n for n in engine.state.notifications.values() if n.kind == NotificationKind.OutageEnd]
    assert outage.end == end
    assert len(ends) == 1 and not ends[0].late


def test_close_outage_late_flag(engine, netbanking):
    engine.open_outage(service=netbanking, start=T0, actor="noc", ts=T0)
    end = at(minutes=40)
    engine.close_outage(service=netbanking, end=end, now=end + timedelta(minutes=20),
                        actor="noc", ts=end + timedelta(minutes=20))
    ends = [n for n in engine.state.notifications.values() if n.kind == NotificationKind.OutageEnd]
    assert ends[0].late
    assert "later than the 15-minute target" in ends[0].body
    closed_events = [e for e in engine.log.events if e.event_kind == "outage_closed"]
    assert closed_events[-1].payload["late"] is True


def test_close_unknown_service_rejected(engine):
    with pytest.raises(NotFound):
        engine.close_outage(service="ghost", end=T0, now=T0, actor="noc", ts=T0)


def test_every_closed_outage_has_exactly_one_start_and_end(engine, netbanking):
    for n in range(4):
        start = at(days=n)
        engine.open_outage(service=netbanking, start=start, actor="noc", ts=start)
        engine.close_outage(service=netbanking, end=start + timedelta(minutes=30),
                            now=start + timedelta(minutes=31), actor="noc",
                            ts=start + timedelta(minutes=31))
    for outage in engine.state.outages.values():
        starts = [n for n in engine.state.notifications.values()
                  if n.kind == NotificationKind.OutageStart and n.entity_id == outage.id]
        ends = [n for n in engine.state.notifications.values()
                if n.kind == NotificationKind.OutageEnd and n.entity_id == outage.id]
        assert len(starts) == 1 and len(ends) == 1


def test_downtime_feed_matches_outage_records(engine, netbanking):
    """Cross-module consistency: vendor_sla downtime equals the closed records."""
    spans = [(0, 30), (100, 160), (300, 345)]
    for n, (a, b) in enumerate(spans):
        engine.open_outage(service=netbanking, start=at(minutes=a), actor="noc", ts=at(minutes=a))
        engine.close_outage(service=netbanking, end=at(minutes=b), now=at(minutes=b),
                            actor="noc", ts=at(minutes=b))
    period = parse_period("2016Q1")
    closed = [o for o in engine.state.outages.values() if o.end is not None]
    expected = sum(b - a for a, b in spans)
    assert compute_downtime(closed, period) == expected


def test_change_schedule_fanout_and_idempotence(engine, project):
    change = engine.submit_change(
        project_id=project.id, target="crm", kind="Software", priority="Normal",
        downtime_estimate_minutes=15, risk_note="r", alternate_solution="a", roi_justification="roi",
        affected_departments=["Sales", "HR"], actor="admin", ts=T0,
    )
    engine.cab_decide(change_id=change.id, approve=True, head_signoff="Head", actor="cab", ts=T0)
    engine.schedule_change(change_id=change.id, when=at(hours=80), now=T0, actor="admin", ts=T0)
    scheduled = [n for n in engine.state.notifications.values()
                 if n.kind == NotificationKind.ChangeScheduled]
    assert len(scheduled) == 2
    assert all(change.id in n.body for n in scheduled)


def test_replay_shows_intimation_before_every_scheduled_change(tmp_path):
    """Walk the log: each change_scheduled event has ChangeScheduled
    notifications emitted no later than the scheduled window."""
    engine = Engine(log_path=str(tmp_path / "events.log"))
    project = engine.create_project(name="P", organization="O", actor="admin", ts=T0)
    for n in range(3):
        change = engine.submit_change(
            project_id=project.id, target=f"app-{n}", kind="Software", priority="Normal",
            downtime_estimate_minutes=5, risk_note="r", alternate_solution="a",
            roi_justification="roi", affected_departments=["HR", "Sales"], actor="admin", ts=T0,
        )
        engine.cab_decide(change_id=change.id, approve=True, head_signoff="H", actor="cab", ts=T0)
        engine.schedule_change(change_id=change.id, when=at(hours=96 + n), now=T0, actor="a", ts=T0)
    events = list(engine.log.events)
    scheduled = [e for e in events if e.event_kind == "change_scheduled"]
    assert len(scheduled) == 3
    for event in scheduled:
        when = event.payload["when"]
        notes = [
            e for e in events
            if e.event_kind == "notification_emitted"
            and e.payload["kind"] == "ChangeScheduled"
            and e.payload["entity_id"] == event.payload["id"]
        ]
        assert notes, f"no intimation for {event.payload['id']}"
        assert all(n.payload["created_at"] <= when for n in notes)


def test_file_sink_appends_lines(tmp_path):
    sink = FileSink(str(tmp_path / "notes.jsonl"))
    assert sink.deliver("dept:HR", "subject", "body")
    assert sink.deliver("dept:Sales", "subject", "body")
    assert len((tmp_path / "notes.jsonl").read_text().splitlines()) == 2
