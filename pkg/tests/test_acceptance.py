"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as the
criteria execute. Randomized checks use fixed seeds; all rate arithmetic is
exact (Fraction), so oracle comparisons use zero tolerance.
"""

import functools
import itertools
import random
from datetime import date, datetime, timedelta, timezone
from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from itil_forge import Engine, ServiceConfig
from itil_forge.api import create_app
from itil_forge.assets import LicensePool
from itil_forge.config import SlaConfig
from itil_forge.errors import LogCorrupt, NotFound, RuleViolation, StateConflict, ValidationFailed
from itil_forge.events import read_events
from itil_forge.fixtures import build_demo_fixture
from itil_forge.lifecycle import PHASES
from itil_forge.notifications import NotificationKind, OutageRecord
from itil_forge.periods import parse_period
from itil_forge.sla import (
    QuarterlyReport,
    SatisfactionSurvey,
    build_quarterly_report,
    compute_downtime,
    compute_resolution_rate,
    consolidate_annual,
    evaluate_renewal,
)
from itil_forge.tickets import TICKET_ID_RE, Ticket, TicketCategory, TicketScope, TicketState, RiskLevel

UTC = timezone.utc
T0 = datetime(2016, 3, 1, 9, 0, 0, tzinfo=UTC)
PHASE_VALUES = [p.value for p in PHASES]
AUTH = {"Authorization": "Bearer dev-token"}


def criterion(label):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"FAIL [{label}]")
                raise
            print(f"PASS [{label}]")

        return run

    return wrap


def fresh_engine():
    return Engine(ServiceConfig(), log_path=None)


# --------------------------------------------------------------------------


@criterion("phase gating: 10,000 random sequences stay a prefix of the phase order")
def test_phase_gating_randomized():
    engine = fresh_engine()
    rng = random.Random(20160301)
    checklists = engine.config.gate_checklists
    for trial in range(10_000):
        project = engine.create_project(
            name=f"proj-{trial}", organization="FuzzCo", actor="fuzz", ts=T0
        )
        history = [project.current_phase.value]
        for _ in range(rng.randint(3, 10)):
            phase = engine.get_project(project.id).current_phase.value
            op = rng.choice(("evidence", "close", "advance", "advance"))
            try:
                if op == "evidence":
                    engine.submit_evidence(
                        project_id=project.id, phase=phase,
                        kind=rng.choice(checklists[phase]), doc_ref="d", actor="fuzz", ts=T0,
                    )
                elif op == "close":
                    engine.close_gate(project_id=project.id, phase=phase, actor="fuzz", ts=T0)
                else:
                    gate_open = not engine.get_project(project.id).gates[
                        engine.get_project(project.id).current_phase
                    ].closed
                    try:
                        engine.advance_phase(project_id=project.id, actor="fuzz", ts=T0)
                        advanced = True
                    except (RuleViolation, StateConflict):
                        advanced = False
                    # advance with any open gate is always rejected
                    assert not (gate_open and advanced), "advance succeeded through an open gate"
            except (RuleViolation, StateConflict, ValidationFailed):
                pass
            current = engine.get_project(project.id).current_phase.value
            if current != history[-1]:
                history.append(current)
        assert history == PHASE_VALUES[: len(history)], f"phase history {history} is not a prefix"


@criterion("ticket ids: 100,000 mixed opens are unique, well-formed, per-category gapless")
def test_ticket_ids_100k():
    engine = fresh_engine()
    vendor = engine.register_vendor(name="V", contact="c", authorized_for=["Servers"], actor="a", ts=T0)
    asset = engine.register_asset(
        device="srv", category="Servers", vendor_id=vendor.id, location="DC",
        purchase_date=date(2016, 1, 1), warranty_months=12, actor="a", ts=T0,
    )
    rng = random.Random(424242)
    seen = set()
    counts = {"apl": 0, "hrd": 0}
    for _ in range(100_000):
        category = "Application" if rng.random() < 0.5 else "Hardware"
        ticket = engine.open_ticket(
            category=category, issue="i", username="u", asset_tag=asset.tag,
            risk_level="Low", scope="SingleUser", actor="d", ts=T0,
        )
        assert TICKET_ID_RE.match(ticket.id), f"malformed id {ticket.id}"
        assert ticket.id not in seen, f"duplicate id {ticket.id}"
        seen.add(ticket.id)
        prefix = ticket.id[:3]
        counts[prefix] += 1
        assert int(ticket.id[3:]) == counts[prefix], f"gap in {prefix} sequence at {ticket.id}"
    assert len(seen) == 100_000


@criterion("change windows: 72h notice, 24-48h emergency, 3h release, exact boundaries")
def test_change_window_boundaries():
    engine = fresh_engine()
    project = engine.create_project(name="W", organization="O", actor="a", ts=T0)

    def make_change(priority):
        return engine.submit_change(
            project_id=project.id, target=f"t-{priority}-{random.random()}", kind="Software",
            priority=priority, downtime_estimate_minutes=5, risk_note="r", alternate_solution="alt",
            roi_justification="roi", affected_departments=["HR"], actor="a", ts=T0,
        )

    def cab(change):
        engine.cab_decide(change_id=change.id, approve=True, head_signoff="H", actor="cab", ts=T0)
        return change

    # Normal: 71h59m rejected, 72h accepted
    c = cab(make_change("Normal"))
    with pytest.raises(RuleViolation):
        engine.schedule_change(
            change_id=c.id, when=T0 + timedelta(hours=71, minutes=59), now=T0, actor="a", ts=T0
        )
    engine.schedule_change(change_id=c.id, when=T0 + timedelta(hours=72), now=T0, actor="a", ts=T0)

    # Emergency: 23h rejected, 24h and 48h accepted, 49h rejected
    for hours, ok in ((23, False), (24, True), (48, True), (49, False)):
        c = cab(make_change("Emergency"))
        if ok:
            engine.schedule_change(
                change_id=c.id, when=T0 + timedelta(hours=hours), now=T0, actor="a", ts=T0
            )
        else:
            with pytest.raises(RuleViolation):
                engine.schedule_change(
                    change_id=c.id, when=T0 + timedelta(hours=hours), now=T0, actor="a", ts=T0
                )

    # Release: pass+3h accepted, pass+3h01m rejected
    def tested_change():
        c = cab(make_change("Normal"))
        engine.schedule_change(change_id=c.id, when=T0 + timedelta(hours=80), now=T0, actor="a", ts=T0)
        pass_at = T0 + timedelta(hours=80, minutes=30)
        engine.record_test_run(
            change_id=c.id, dummy_input="dummy", outcome="Pass", at=pass_at, tester="q",
            actor="q", ts=pass_at,
        )
        return c, pass_at

    c, pass_at = tested_change()
    with pytest.raises(RuleViolation):
        engine.approve_release(
            change_id=c.id, at=pass_at + timedelta(hours=3, minutes=1), approver="o", actor="o",
            ts=pass_at,
        )
    engine.approve_release(
        change_id=c.id, at=pass_at + timedelta(hours=3), approver="o", actor="o", ts=pass_at
    )
    assert engine.get_change(c.id).state.value == "Released"


@criterion("expert escalation: breach listed at deadline+1s, absent at deadline-1s")
def test_expert_escalation_breach_boundary():
    engine = fresh_engine()
    vendor = engine.register_vendor(name="V", contact="c", authorized_for=["Servers"], actor="a", ts=T0)
    asset = engine.register_asset(
        device="srv", category="Servers", vendor_id=vendor.id, location="DC",
        purchase_date=date(2016, 1, 1), warranty_months=12, actor="a", ts=T0,
    )
    ticket = engine.open_ticket(
        category="Application", issue="approval button of the CEO is down", username="ceo-office",
        asset_tag=asset.tag, risk_level="Critical", scope="Department", department="Management",
        actor="d", ts=T0,
    )
    engine.analyze_ticket(ticket_id=ticket.id, actor="d", ts=T0)
    engine.escalate_ticket(
        ticket_id=ticket.id, to_level="Expert", reason="business stopped", at=T0, actor="d", ts=T0
    )
    deadline = engine.get_ticket(ticket.id).escalation_deadline
    assert deadline == T0 + timedelta(hours=1)
    assert [t.id for t in engine.escalation_breaches(now=deadline + timedelta(seconds=1))] == [ticket.id]
    assert engine.escalation_breaches(now=deadline - timedelta(seconds=1)) == []


def _oracle_resolution(tickets, period):
    total = resolved = 0
    for t in tickets:
        if period.start <= t.opened_at < period.end:
            total += 1
            if t.state in (TicketState.Resolved, TicketState.Closed):
                resolved += 1
    return Fraction(100) if total == 0 else Fraction(100) * Fraction(resolved, total)


def _frac_minutes(delta):
    micros = (delta.days * 86400 + delta.seconds) * 1_000_000 + delta.microseconds
    return Fraction(micros, 60_000_000)


def _oracle_downtime(outages, period):
    by_service = {}
    for o in outages:
        if o.end is None:
            continue
        start, end = max(o.start, period.start), min(o.end, period.end)
        if start < end:
            by_service.setdefault(o.service, []).append((start, end))
    total = Fraction(0)
    for intervals in by_service.values():
        points = sorted({p for iv in intervals for p in iv})
        for a, b in zip(points, points[1:]):
            if any(s <= a and b <= e for s, e in intervals):
                total += _frac_minutes(b - a)
    return total


def _random_ticket(rng, n):
    opened = datetime(2016, rng.randint(1, 12), rng.randint(1, 28), rng.randint(0, 23), tzinfo=UTC)
    return Ticket(
        id=f"hrd{n:06d}", category=TicketCategory.Hardware, issue="i", username="u",
        asset_tag="AST000001", risk_level=rng.choice(list(RiskLevel)),
        scope=TicketScope.SingleUser, department=None, opened_at=opened,
        state=rng.choice(list(TicketState)),
    )


@criterion("SLA math: 1,000 random sets match brute-force recomputation exactly")
def test_sla_oracle_equivalence():
    rng = random.Random(777)
    period = parse_period("2016Q3")
    for case in range(1_000):
        tickets = [_random_ticket(rng, n) for n in range(rng.randint(0, 30))]
        outages = []
        for n in range(rng.randint(0, 10)):
            start = period.start + timedelta(minutes=rng.randint(-20000, 140000))
            end = start + timedelta(minutes=rng.randint(0, 4000), seconds=rng.randint(0, 59))
            outages.append(OutageRecord(id=f"OUT{n:06d}", service=rng.choice("abc"), start=start, end=end))
        assert compute_resolution_rate(tickets, period) == _oracle_resolution(tickets, period)
        assert compute_downtime(outages, period) == _oracle_downtime(outages, period)

        # annual consolidation vs brute force over the union of four quarters
        year_tickets = [_random_ticket(rng, 1000 + n) for n in range(rng.randint(0, 40))]
        quarters = [parse_period(f"2016Q{q}") for q in (1, 2, 3, 4)]
        reports = [build_quarterly_report("V", q, year_tickets, outages) for q in quarters]
        annual = consolidate_annual(reports)
        in_year = [t for t in year_tickets if t.opened_at.year == 2016]
        resolved = sum(1 for t in in_year if t.state in (TicketState.Resolved, TicketState.Closed))
        expected = Fraction(100) if not in_year else Fraction(100) * Fraction(resolved, len(in_year))
        assert annual.resolution_pct == expected


@criterion("renewal rule table: 0.4%->Renew, 0.8%->Review, mean 3.9->Review, 3%->Terminate")
def test_renewal_rule_table():
    config = SlaConfig()

    def annual(unresolved_pct):
        total = unresolved_pct.denominator * 100
        unresolved = unresolved_pct.numerator
        return consolidate_annual([
            _quarterly("V", "2016Q1", total, total - unresolved),
            _quarterly("V", "2016Q2", 0, 0),
            _quarterly("V", "2016Q3", 0, 0),
            _quarterly("V", "2016Q4", 0, 0),
        ])

    rows = [
        (Fraction(4, 10), Fraction(45, 10), "Renew"),
        (Fraction(8, 10), Fraction(45, 10), "ReviewRequired"),
        (Fraction(2, 10), Fraction(39, 10), "ReviewRequired"),
        (Fraction(3), Fraction(45, 10), "Terminate"),
    ]
    for unresolved, mean, expected in rows:
        survey = SatisfactionSurvey(period="2016", scores=[5], mean=mean)
        decision = evaluate_renewal(annual(unresolved), survey, config)
        assert decision.outcome.value == expected, (
            f"unresolved {unresolved}% mean {mean}: got {decision.outcome.value}, wanted {expected}"
        )


def _quarterly(vendor, label, total, resolved):
    return QuarterlyReport(
        vendor_id=vendor, period=label, total_tickets=total, resolved=resolved,
        resolution_pct=Fraction(100) if total == 0 else Fraction(100) * Fraction(resolved, total),
        total_downtime_minutes=Fraction(0), permanent_fix_ratio=Fraction(0),
        critical_handled=0, critical_resolved=0, unresolved_reasons=[],
    )


@criterion("power rule: 100 random loads allocate exactly double")
def test_power_rule_random_loads():
    engine = fresh_engine()
    rng = random.Random(31)
    for n in range(100):
        load = round(rng.uniform(0.1, 80.0), rng.randint(0, 4))
        plan = engine.plan_power(room=f"room-{n}", measured_avg_load=load, actor="a", ts=T0)
        assert plan.allocated_load == 2 * load
        assert plan.measured_avg_load == load


@criterion("license pool: exhaustive sequences (total<=3, length<=6) never over-allocate")
def test_license_pool_exhaustive():
    pairs = [("u1", "a1"), ("u1", "a2"), ("u2", "a1")]
    ops = [("alloc", p) for p in pairs] + [("release", p) for p in pairs]
    for total in (0, 1, 2, 3):
        for length in range(1, 7):
            for seq in itertools.product(ops, repeat=length):
                pool = LicensePool(product="x", total=total)
                for op, (user, tag) in seq:
                    try:
                        if op == "alloc":
                            pool.allocate(user, tag, T0)
                        else:
                            pool.release(user, tag)
                    except (StateConflict, NotFound):
                        pass
                    assert len(pool.allocations) <= total


def _random_api_mutations(client, rng, count):
    assets = ["AST000001", "AST000002", "AST000003"]
    open_tickets = []
    analyzing = []
    outage_open = False
    succeeded = 0
    for i in range(count):
        roll = rng.random()
        ts = datetime(2017, rng.randint(1, 12), rng.randint(1, 28), rng.randint(0, 23), tzinfo=UTC)
        if roll < 0.35:
            r = client.post("/tickets", json={
                "category": rng.choice(["Application", "Hardware"]),
                "issue": f"random issue {i}", "username": f"u{i}", "asset_tag": rng.choice(assets),
                "risk_level": rng.choice(["Low", "Medium", "High", "Critical"]),
                "scope": "SingleUser", "ts": ts.isoformat(),
            }, headers=AUTH)
            if r.status_code == 201:
                open_tickets.append(r.json()["id"])
        elif roll < 0.5 and open_tickets:
            tid = open_tickets.pop(rng.randrange(len(open_tickets)))
            r = client.post(f"/tickets/{tid}/analyze", json={"ts": ts.isoformat()}, headers=AUTH)
            if r.status_code == 200:
                analyzing.append(tid)
        elif roll < 0.6 and analyzing:
            tid = analyzing.pop(rng.randrange(len(analyzing)))
            r = client.post(f"/tickets/{tid}/resolve", json={
                "resolution": f"fix {i}", "permanence": rng.choice(["Permanent", "Temporary"]),
                "at": ts.isoformat(), "ts": ts.isoformat(),
            }, headers=AUTH)
        elif roll < 0.7:
            r = client.post("/assets", json={
                "device": f"dev-{i}", "category": rng.choice(["Laptops", "Desktops"]),
                "vendor_id": "VND000002", "location": "HQ", "purchase_date": "2016-06-01",
                "warranty_months": rng.randint(0, 48), "ts": ts.isoformat(),
            }, headers=AUTH)
            if r.status_code == 201:
                assets.append(r.json()["tag"])
        elif roll < 0.8:
            r = client.post("/licenses/Windows XP/allocations", json={
                "user": f"rand-{i}", "asset_tag": rng.choice(assets), "ts": ts.isoformat(),
            }, headers=AUTH)
        elif roll < 0.85:
            r = client.post("/power-plans", json={
                "room": f"room-{i}", "measured_avg_load": rng.uniform(0.5, 20), "ts": ts.isoformat(),
            }, headers=AUTH)
        elif roll < 0.9:
            r = client.post("/ports", json={
                "port_id": f"R-{i:05d}", "kind": rng.choice(["Data", "Voice"]),
                "location": "HQ", "ts": ts.isoformat(),
            }, headers=AUTH)
        elif roll < 0.95:
            r = client.post("/projects", json={
                "name": f"rand-{i}", "organization": "FuzzCo", "ts": ts.isoformat(),
            }, headers=AUTH)
        else:
            if outage_open:
                r = client.post("/outages/netbanking/close", json={
                    "end": ts.isoformat(), "now": ts.isoformat(), "ts": ts.isoformat(),
                }, headers=AUTH)
                outage_open = False
            else:
                r = client.post("/outages", json={"service": "netbanking", "start": ts.isoformat(),
                                                  "ts": ts.isoformat()}, headers=AUTH)
                outage_open = r.status_code == 201
        if r.status_code in (200, 201):
            succeeded += 1
    return succeeded


@criterion("event log: fixture + 1,000 random mutations replay byte-identically; torn logs rejected")
def test_event_log_determinism(tmp_path):
    log_path = str(tmp_path / "events.log")
    engine = Engine(ServiceConfig(), log_path=log_path)
    app = create_app(engine=engine)
    with TestClient(app) as client:
        for call in build_demo_fixture():
            response = client.request(call["method"], call["path"], json=call.get("body"), headers=AUTH)
            assert response.status_code < 400, f"fixture call {call['path']} failed: {response.text}"
        succeeded = _random_api_mutations(client, random.Random(90125), 1_000)
        assert succeeded >= 800, f"only {succeeded} of 1000 random mutations succeeded"
        live = engine.dump()

    replayed = Engine.replay_file(log_path)
    assert replayed.dump() == live, "replayed state differs from live state"

    # truncated final line must be rejected with the line number
    with open(log_path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines(keepends=True)
    torn = str(tmp_path / "torn.log")
    with open(torn, "w", encoding="utf-8") as fh:
        fh.write("".join(lines[:-1]) + lines[-1][: len(lines[-1]) // 3])
    with pytest.raises(LogCorrupt) as err:
        list(read_events(torn))
    assert err.value.line_no == len(lines)


@criterion("outage notifications: one start and one end per closed outage, late flag past 15min")
def test_outage_notification_pairing():
    engine = fresh_engine()
    engine.register_service_contacts(service="netbanking", users=["+91-1", "+91-2"], actor="a", ts=T0)
    lates = []
    for n in range(6):
        start = T0 + timedelta(days=n)
        end = start + timedelta(minutes=30)
        notice_delay = timedelta(minutes=20 if n % 2 else 5)
        engine.open_outage(service="netbanking", start=start, actor="noc", ts=start)
        engine.close_outage(service="netbanking", end=end, now=end + notice_delay,
                            actor="noc", ts=end + notice_delay)
        lates.append(notice_delay > timedelta(minutes=15))
    notes = list(engine.state.notifications.values())
    for i, outage in enumerate(engine.state.outages.values()):
        assert outage.end is not None
        starts = [x for x in notes if x.kind == NotificationKind.OutageStart and x.entity_id == outage.id]
        ends = [x for x in notes if x.kind == NotificationKind.OutageEnd and x.entity_id == outage.id]
        assert len(starts) == 1, f"{outage.id}: {len(starts)} start notifications"
        assert len(ends) == 1, f"{outage.id}: {len(ends)} end notifications"
        assert ends[0].late == lates[i]
