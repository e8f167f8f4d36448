import json

import pytest

from itil_forge import Engine, ServiceConfig
from itil_forge.errors import LogCorrupt
from itil_forge.events import read_events

from conftest import T0, at


def drive(engine):
    vendor = engine.register_vendor(
        name="TechCorp", contact="044", authorized_for=["Servers"], actor="admin", ts=T0
    )
    engine.create_project(name="HQ", organization="Acme", actor="admin", ts=T0)
    asset = engine.register_asset(
        device="srv", category="Servers", vendor_id=vendor.id, location="DC",
        purchase_date=T0.date(), warranty_months=12, actor="admin", ts=T0,
    )
    t = engine.open_ticket(
        category="Hardware", issue="disk", username="u", asset_tag=asset.tag,
        risk_level="High", scope="SingleUser", actor="desk", ts=at(minutes=1),
    )
    engine.analyze_ticket(ticket_id=t.id, actor="desk", ts=at(minutes=2))
    engine.resolve_ticket(ticket_id=t.id, resolution="swap", permanence="Permanent",
                          at=at(minutes=30), actor="desk", ts=at(minutes=30))
    return engine


def test_seq_is_dense_and_batches_are_contiguous(tmp_path):
    engine = drive(Engine(log_path=str(tmp_path / "events.log")))
    seqs = [e.seq for e in engine.log.events]
    assert seqs == list(range(1, len(seqs) + 1))


def test_replay_reproduces_identical_state(tmp_path):
    path = str(tmp_path / "events.log")
    live = drive(Engine(log_path=path))
    replayed = Engine.replay_file(path)
    assert replayed.dump() == live.dump()


def test_replay_of_empty_log_is_empty_state(tmp_path):
    path = tmp_path / "events.log"
    path.write_text("")
    engine = Engine.replay_file(str(path))
    assert engine.state.projects == {} and engine.state.tickets == {}
    assert engine.dump() == Engine(log_path=None).dump()


def test_restart_continues_from_existing_log(tmp_path):
    path = str(tmp_path / "events.log")
    first = drive(Engine(log_path=path))
    first.close()
    second = Engine(log_path=path)
    assert second.dump() == first.dump()
    second.create_project(name="Again", organization="Acme", actor="admin", ts=at(hours=1))
    seqs = [e.seq for e in second.log.events]
    assert seqs == list(range(1, len(seqs) + 1))


def test_truncated_final_line_is_rejected_with_line_number(tmp_path):
    path = tmp_path / "events.log"
    drive(Engine(log_path=str(path))).close()
    full = path.read_text()
    lines = full.splitlines(keepends=True)
    path.write_text("".join(lines[:-1]) + lines[-1][: len(lines[-1]) // 2])
    with pytest.raises(LogCorrupt) as err:
        list(read_events(str(path)))
    assert err.value.line_no == len(lines)


def test_torn_tail_recovery_drops_only_the_partial_line(tmp_path):
    path = tmp_path / "events.log"
    engine = drive(Engine(log_path=str(path)))
    before = engine.dump()
    engine.create_project(name="Torn", organization="Acme", actor="admin", ts=at(hours=2))
    engine.close()
    lines = path.read_text().splitlines(keepends=True)
    path.write_text("".join(lines[:-1]) + lines[-1][:10])  # tear mid-write
    recovered = Engine.replay_file(str(path), recover=True)
    assert recovered.dump() == before
    with pytest.raises(LogCorrupt):
        Engine.replay_file(str(path))


def test_fully_written_batch_survives_restart(tmp_path):
    path = str(tmp_path / "events.log")
    engine = drive(Engine(log_path=path))
    engine.create_project(name="Durable", organization="Acme", actor="admin", ts=at(hours=2))
    engine.close()
    restarted = Engine(log_path=path)
    assert ("Acme", "Durable") in restarted.state.project_names


def test_corrupt_middle_line_names_the_line(tmp_path):
    path = tmp_path / "events.log"
    drive(Engine(log_path=str(path))).close()
    lines = path.read_text().splitlines(keepends=True)
    lines[2] = "not json at all\n"
    path.write_text("".join(lines))
    with pytest.raises(LogCorrupt) as err:
        list(read_events(str(path)))
    assert err.value.line_no == 3
    # recovery only forgives the *final* line, not interior damage
    with pytest.raises(LogCorrupt):
        list(read_events(str(path), recover_torn_tail=True))


def test_seq_gap_is_corruption(tmp_path):
    path = tmp_path / "events.log"
    drive(Engine(log_path=str(path))).close()
    lines = path.read_text().splitlines(keepends=True)
    del lines[1]
    path.write_text("".join(lines))
    with pytest.raises(LogCorrupt) as err:
        list(read_events(str(path)))
    assert err.value.line_no == 2


def test_event_lines_carry_the_wire_schema(tmp_path):
    path = tmp_path / "events.log"
    drive(Engine(log_path=str(path))).close()
    for line in path.read_text().splitlines():
        obj = json.loads(line)
        assert sorted(obj) == ["actor", "entity_id", "entity_type", "event_kind", "payload", "seq", "ts"]


def test_every_mutation_appends_a_batch(tmp_path):
    engine = Engine(log_path=str(tmp_path / "events.log"))
    assert len(engine.log.events) == 0
    engine.create_project(name="P", organization="O", actor="admin", ts=T0)
    n = len(engine.log.events)
    assert n >= 1
    try:
        engine.create_project(name="P", organization="O", actor="admin", ts=T0)
    except Exception:
        pass
    assert len(engine.log.events) == n  # failed mutation leaves no events
