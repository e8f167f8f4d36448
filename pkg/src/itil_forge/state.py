"""The full in-memory state, every entity map in one place.

State is only ever mutated by event appliers, so replaying the audit log
rebuilds an identical value. Derived indexes (name uniqueness, notification
idempotence keys, open-outage map) are maintained by the same appliers and
are excluded from the canonical dump.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields as dc_fields, is_dataclass
from datetime import date, datetime
from enum import Enum
from fractions import Fraction
from typing import Any

from .assets import Asset, LicensePool, PortRecord, PowerPlan, ServerDoc
from .changes import ChangeRequest, TestRun
from .errors import StateConflict
from .events import iso
from .lifecycle import Project
from .notifications import Notification, OutageRecord
from .procurement import ProcurementRequest, Vendor
from .sla import RenewalDecision, SatisfactionSurvey
from .tickets import KnowledgeEntry, Ticket

_DERIVED_FIELDS = {"project_names", "notified_keys", "open_outage_by_service"}


@dataclass
class EngineState:
    projects: dict[str, Project] = field(default_factory=dict)
    procurements: dict[str, ProcurementRequest] = field(default_factory=dict)
    vendors: dict[str, Vendor] = field(default_factory=dict)
    vendor_acks: dict[str, dict] = field(default_factory=dict)
    assets: dict[str, Asset] = field(default_factory=dict)
    license_pools: dict[str, LicensePool] = field(default_factory=dict)
    server_docs: dict[str, list[ServerDoc]] = field(default_factory=dict)
    ports: dict[str, PortRecord] = field(default_factory=dict)
    power_plans: dict[str, PowerPlan] = field(default_factory=dict)
    changes: dict[str, ChangeRequest] = field(default_factory=dict)
    test_runs: dict[str, list[TestRun]] = field(default_factory=dict)
    tickets: dict[str, Ticket] = field(default_factory=dict)
    knowledge: dict[str, KnowledgeEntry] = field(default_factory=dict)
    surveys: dict[str, SatisfactionSurvey] = field(default_factory=dict)
    renewal_decisions: dict[str, RenewalDecision] = field(default_factory=dict)
    notifications: dict[str, Notification] = field(default_factory=dict)
    outages: dict[str, OutageRecord] = field(default_factory=dict)
    service_contacts: dict[str, list[str]] = field(default_factory=dict)
    counters: dict[str, int] = field(default_factory=dict)
    # derived indexes, rebuilt by the same appliers on replay
    project_names: dict[tuple[str, str], str] = field(default_factory=dict)
    notified_keys: set[tuple[str, str, str]] = field(default_factory=set)
    open_outage_by_service: dict[str, str] = field(default_factory=dict)

    def next_id(self, key: str, prefix: str, width: int = 6, *, reserve: int = 0) -> str:
        """Next id for the counter; ``reserve`` skips ids already claimed by
        drafts built earlier in the same (not yet applied) batch."""
        n = self.counters.get(key, 0) + 1 + reserve
        if n > 10**width - 1:
            raise StateConflict(
                "id-overflow", f"{prefix} id space is exhausted ({10**width - 1} ids issued)"
            )
        return f"{prefix}{n:0{width}d}"

    def bump_counter(self, key: str, entity_id: str, prefix: str) -> None:
        n = int(entity_id[len(prefix):])
        if n > self.counters.get(key, 0):
            self.counters[key] = n


def to_jsonable(value: Any) -> Any:
    if is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dc_fields(value)}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, datetime):
        return iso(value)
    if isinstance(value, date):
        return value.isoformat()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted(to_jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def dump_state(state: EngineState) -> bytes:
    """Canonical byte serialization used by the replay-determinism checks."""
    doc = {
        f.name: to_jsonable(getattr(state, f.name))
        for f in dc_fields(state)
        if f.name not in _DERIVED_FIELDS
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
