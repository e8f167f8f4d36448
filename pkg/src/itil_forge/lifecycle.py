"""Five-phase lifecycle per project: Strategy, Design, Transition, Operation, CSI.

A phase gate collects evidence documents; a gate must be closed before the
project can advance, and a project can never skip or regress a phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import TYPE_CHECKING

from .errors import NotFound, RuleViolation, StateConflict, ValidationFailed
from .events import EventDraft, iso, parse_ts

if TYPE_CHECKING:  # pragma: no cover
    from .config import ServiceConfig
    from .state import EngineState


class Phase(str, Enum):
    Strategy = "Strategy"
    Design = "Design"
    Transition = "Transition"
    Operation = "Operation"
    CSI = "CSI"


PHASES: tuple[Phase, ...] = tuple(Phase)


def successor(phase: Phase) -> Phase | None:
    idx = PHASES.index(phase)
    return PHASES[idx + 1] if idx + 1 < len(PHASES) else None


@dataclass
class EvidenceItem:
    kind: str
    doc_ref: str
    at: datetime


@dataclass
class PhaseGate:
    phase: Phase
    required_evidence: list[str]
    collected: list[EvidenceItem] = field(default_factory=list)
    closed: bool = False
    closed_by: str | None = None

    def collected_kinds(self) -> set[str]:
        return {item.kind for item in self.collected}

    def missing_kinds(self) -> list[str]:
        return sorted(set(self.required_evidence) - self.collected_kinds())

    def has(self, kind: str, doc_ref: str) -> bool:
        return any(i.kind == kind and i.doc_ref == doc_ref for i in self.collected)


@dataclass
class Project:
    id: str
    name: str
    organization: str
    current_phase: Phase
    gates: dict[Phase, PhaseGate]
    created_at: datetime


def coerce_phase(value: str) -> Phase:
    try:
        return Phase(value)
    except ValueError:
        raise ValidationFailed("bad-phase", f"unknown phase {value!r}", {"valid": [p.value for p in PHASES]})


def get_project(state: "EngineState", project_id: str) -> Project:
    project = state.projects.get(project_id)
    if project is None:
        raise NotFound("project-not-found", f"no project {project_id}")
    return project


# ---------------------------------------------------------------- commands

def create_project(
    state: "EngineState", config: "ServiceConfig", *, name: str, organization: str, ts: datetime
) -> list[EventDraft]:
    name = name.strip()
    organization = organization.strip()
    if not name:
        raise ValidationFailed("empty-name", "project name must be non-empty")
    if not organization:
        raise ValidationFailed("empty-organization", "organization must be non-empty")
    if (organization, name) in state.project_names:
        raise StateConflict(
            "duplicate-project",
            f"project {name!r} already exists for organization {organization!r}",
        )
    pid = state.next_id("project", "PRJ")
    payload = {
        "id": pid,
        "name": name,
        "organization": organization,
        "created_at": iso(ts),
        "required_evidence": {p.value: list(config.gate_checklists[p.value]) for p in PHASES},
    }
    return [EventDraft("project", pid, "project_created", payload)]


def submit_evidence(
    state: "EngineState", *, project_id: str, phase: Phase, kind: str, doc_ref: str, ts: datetime
) -> list[EventDraft]:
    project = get_project(state, project_id)
    if not kind.strip():
        raise ValidationFailed("empty-kind", "evidence kind must be non-empty")
    if not doc_ref.strip():
        raise ValidationFailed("missing-doc-ref", "evidence needs a document reference")
    if phase != project.current_phase:
        raise RuleViolation(
            "out-of-order-evidence",
            f"project is in {project.current_phase.value}, cannot take {phase.value} evidence",
        )
    gate = project.gates[phase]
    if gate.closed:
        raise StateConflict("gate-closed", f"{phase.value} gate of {project_id} is already closed")
    payload = {"project_id": project_id, "phase": phase.value, "kind": kind, "doc_ref": doc_ref, "at": iso(ts)}
    return [EventDraft("project", project_id, "evidence_submitted", payload)]


def close_gate(state: "EngineState", *, project_id: str, phase: Phase, actor: str, ts: datetime) -> list[EventDraft]:
    project = get_project(state, project_id)
    if phase != project.current_phase:
        raise RuleViolation(
            "out-of-order-gate",
            f"project is in {project.current_phase.value}, cannot close the {phase.value} gate",
        )
    gate = project.gates[phase]
    if gate.closed:
        raise StateConflict("gate-already-closed", f"{phase.value} gate of {project_id} was already closed")
    missing = gate.missing_kinds()
    if missing:
        raise RuleViolation(
            "gate-incomplete",
            f"{phase.value} gate of {project_id} is missing evidence: {', '.join(missing)}",
            {"missing": missing},
        )
    payload = {"project_id": project_id, "phase": phase.value, "closed_by": actor, "at": iso(ts)}
    return [EventDraft("project", project_id, "gate_closed", payload)]


def advance_phase(state: "EngineState", *, project_id: str, ts: datetime) -> list[EventDraft]:
    project = get_project(state, project_id)
    nxt = successor(project.current_phase)
    if nxt is None:
        raise StateConflict("terminal-phase", f"{project_id} is already at {Phase.CSI.value}")
    gate = project.gates[project.current_phase]
    if not gate.closed:
        raise RuleViolation(
            "gate-open",
            f"cannot advance {project_id}: {project.current_phase.value} gate is still open",
            {"missing": gate.missing_kinds()},
        )
    payload = {"project_id": project_id, "from": project.current_phase.value, "to": nxt.value, "at": iso(ts)}
    return [EventDraft("project", project_id, "phase_advanced", payload)]


# ---------------------------------------------------------------- appliers

def _apply_project_created(state: "EngineState", payload: dict) -> None:
    gates = {
        p: PhaseGate(phase=p, required_evidence=list(payload["required_evidence"][p.value]))
        for p in PHASES
    }
    project = Project(
        id=payload["id"],
        name=payload["name"],
        organization=payload["organization"],
        current_phase=Phase.Strategy,
        gates=gates,
        created_at=parse_ts(payload["created_at"]),
    )
    state.projects[project.id] = project
    state.project_names[(project.organization, project.name)] = project.id
    state.bump_counter("project", project.id, "PRJ")


def _apply_evidence_submitted(state: "EngineState", payload: dict) -> None:
    gate = state.projects[payload["project_id"]].gates[Phase(payload["phase"])]
    if not gate.has(payload["kind"], payload["doc_ref"]):
        gate.collected.append(EvidenceItem(payload["kind"], payload["doc_ref"], parse_ts(payload["at"])))


def _apply_gate_closed(state: "EngineState", payload: dict) -> None:
    gate = state.projects[payload["project_id"]].gates[Phase(payload["phase"])]
    gate.closed = True
    gate.closed_by = payload["closed_by"]


def _apply_phase_advanced(state: "EngineState", payload: dict) -> None:
    state.projects[payload["project_id"]].current_phase = Phase(payload["to"])


APPLIERS = {
    "project_created": _apply_project_created,
    "evidence_submitted": _apply_evidence_submitted,
    "gate_closed": _apply_gate_closed,
    "phase_advanced": _apply_phase_advanced,
}
