import random

import pytest

from itil_forge.errors import RuleViolation, StateConflict, ValidationFailed
from itil_forge.lifecycle import PHASES, Phase

from conftest import T0, at

PHASE_VALUES = [p.value for p in PHASES]


def test_new_project_starts_in_strategy(project):
    assert project.current_phase == Phase.Strategy
    assert all(not gate.closed for gate in project.gates.values())
    assert sum(len(g.collected) for g in project.gates.values()) == 0


def test_empty_name_rejected(engine):
    with pytest.raises(ValidationFailed) as err:
        engine.create_project(name="", organization="Acme", actor="admin", ts=T0)
    assert err.value.code == "empty-name"


def test_duplicate_name_within_org_rejected(engine, project):
    with pytest.raises(StateConflict):
        engine.create_project(name="HQ-Rollout", organization="Acme", actor="admin", ts=at(hours=1))
    # same name under a different organization is fine
    engine.create_project(name="HQ-Rollout", organization="Globex", actor="admin", ts=at(hours=1))


def test_submit_evidence_records_one_entry(engine, project):
    engine.submit_evidence(
        project_id=project.id, phase="Strategy", kind="ProcurementClosure", doc_ref="LOP#7",
        actor="admin", ts=at(hours=1),
    )
    gate = engine.get_project(project.id).gates[Phase.Strategy]
    assert len(gate.collected) == 1
    assert gate.collected[0].doc_ref == "LOP#7"


def test_submit_evidence_is_idempotent_per_triple(engine, project):
    for _ in range(3):
        engine.submit_evidence(
            project_id=project.id, phase="Strategy", kind="RequirementDoc", doc_ref="doc#3",
            actor="admin", ts=at(hours=1),
        )
    gate = engine.get_project(project.id).gates[Phase.Strategy]
    assert len(gate.collected) == 1


def test_evidence_for_future_phase_rejected(engine, project):
    with pytest.raises(RuleViolation) as err:
        engine.submit_evidence(
            project_id=project.id, phase="Design", kind="DesignDoc", doc_ref="d1",
            actor="admin", ts=at(hours=1),
        )
    assert err.value.code == "out-of-order-evidence"


def test_close_gate_reports_missing_kinds(engine, project):
    required = set(engine.config.gate_checklists["Strategy"])
    submitted = {"RequirementDoc", "ManagementApproval"}
    for kind in sorted(submitted):
        engine.submit_evidence(
            project_id=project.id, phase="Strategy", kind=kind, doc_ref=f"doc-{kind}",
            actor="admin", ts=at(hours=1),
        )
    with pytest.raises(RuleViolation) as err:
        engine.close_gate(project_id=project.id, phase="Strategy", actor="admin", ts=at(hours=2))
    # set-difference oracle
    assert err.value.details["missing"] == sorted(required - submitted)
    assert "ProcurementClosure" in err.value.message


def test_close_gate_then_advance(engine, project):
    for kind in engine.config.gate_checklists["Strategy"]:
        engine.submit_evidence(
            project_id=project.id, phase="Strategy", kind=kind, doc_ref=f"doc-{kind}",
            actor="admin", ts=at(hours=1),
        )
    engine.close_gate(project_id=project.id, phase="Strategy", actor="lead", ts=at(hours=2))
    p = engine.get_project(project.id)
    assert p.gates[Phase.Strategy].closed
    assert p.gates[Phase.Strategy].closed_by == "lead"
    engine.advance_phase(project_id=project.id, actor="admin", ts=at(hours=3))
    assert engine.get_project(project.id).current_phase == Phase.Design


def test_close_gate_twice_is_an_error(engine, project):
    for kind in engine.config.gate_checklists["Strategy"]:
        engine.submit_evidence(
            project_id=project.id, phase="Strategy", kind=kind, doc_ref=f"doc-{kind}",
            actor="admin", ts=at(hours=1),
        )
    engine.close_gate(project_id=project.id, phase="Strategy", actor="admin", ts=at(hours=2))
    with pytest.raises(StateConflict):
        engine.close_gate(project_id=project.id, phase="Strategy", actor="admin", ts=at(hours=3))


def test_advance_blocked_while_gate_open(engine, project):
    with pytest.raises(RuleViolation) as err:
        engine.advance_phase(project_id=project.id, actor="admin", ts=at(hours=1))
    assert err.value.code == "gate-open"


def test_advance_past_csi_is_terminal(engine, project):
    for phase in PHASE_VALUES:
        for kind in engine.config.gate_checklists[phase]:
            engine.submit_evidence(
                project_id=project.id, phase=phase, kind=kind, doc_ref=f"doc-{kind}",
                actor="admin", ts=at(hours=1),
            )
        engine.close_gate(project_id=project.id, phase=phase, actor="admin", ts=at(hours=2))
        if phase != "CSI":
            engine.advance_phase(project_id=project.id, actor="admin", ts=at(hours=3))
    assert engine.get_project(project.id).current_phase == Phase.CSI
    with pytest.raises(StateConflict) as err:
        engine.advance_phase(project_id=project.id, actor="admin", ts=at(hours=4))
    assert err.value.code == "terminal-phase"


def test_closed_gate_rejects_more_evidence(engine, project):
    for kind in engine.config.gate_checklists["Strategy"]:
        engine.submit_evidence(
            project_id=project.id, phase="Strategy", kind=kind, doc_ref=f"doc-{kind}",
            actor="admin", ts=at(hours=1),
        )
    engine.close_gate(project_id=project.id, phase="Strategy", actor="admin", ts=at(hours=2))
    with pytest.raises(StateConflict):
        engine.submit_evidence(
            project_id=project.id, phase="Strategy", kind="RequirementDoc", doc_ref="late",
            actor="admin", ts=at(hours=3),
        )


def test_random_operation_sequences_keep_phase_history_a_prefix(engine):
    """Whatever sequence of operations runs, phases only move down the fixed order."""
    rng = random.Random(4812)
    for trial in range(200):
        project = engine.create_project(
            name=f"P{trial}", organization="RandomCo", actor="admin", ts=at(minutes=trial)
        )
        history = [engine.get_project(project.id).current_phase.value]
        for _ in range(rng.randint(3, 15)):
            op = rng.choice(["evidence", "close", "advance"])
            phase = engine.get_project(project.id).current_phase.value
            try:
                if op == "evidence":
                    kind = rng.choice(engine.config.gate_checklists[phase] + ["Extra"])
                    engine.submit_evidence(
                        project_id=project.id, phase=phase, kind=kind,
                        doc_ref=f"d{rng.randint(1, 3)}", actor="admin", ts=at(minutes=trial),
                    )
                elif op == "close":
                    engine.close_gate(project_id=project.id, phase=phase, actor="admin", ts=at(minutes=trial))
                else:
                    engine.advance_phase(project_id=project.id, actor="admin", ts=at(minutes=trial))
            except (RuleViolation, StateConflict):
                pass
            current = engine.get_project(project.id).current_phase.value
            if current != history[-1]:
                history.append(current)
        assert history == PHASE_VALUES[: len(history)]
