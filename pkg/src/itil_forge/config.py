"""Service configuration: one JSON document, env overrides for listen/data dir.

Validated eagerly; an invalid document raises :class:`ConfigError` with a
diagnostic so startup aborts instead of running half-configured.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import ConfigError

ENV_LISTEN = "ITIL_FORGE_LISTEN"
ENV_DATA_DIR = "ITIL_FORGE_DATA_DIR"

PHASE_ORDER = ("Strategy", "Design", "Transition", "Operation", "CSI")

DEFAULT_GATE_CHECKLISTS: dict[str, list[str]] = {
    "Strategy": ["RequirementDoc", "ManagementApproval", "ProcurementClosure"],
    "Design": ["DesignDoc", "LoadPlan", "PortMap", "ManagementApproval"],
    "Transition": ["ChangeLog", "TestRunReport"],
    "Operation": ["SupportHandbook"],
    "CSI": ["AnnualReport"],
}

REVIEW_PERIODS = ("Quarterly", "HalfYearly")


@dataclass(frozen=True)
class SlaConfig:
    unresolved_target_pct: Fraction = Fraction(1)
    fault_tolerance_band: tuple[Fraction, Fraction] = (Fraction(1, 2), Fraction(1))
    review_period: str = "Quarterly"
    satisfaction_review_threshold: Fraction = Fraction(4)

    def validate(self) -> None:
        if not (0 < self.unresolved_target_pct <= 100):
            raise ConfigError(f"unresolved_target_pct must be in (0, 100], got {self.unresolved_target_pct}")
        low, high = self.fault_tolerance_band
        if low > high:
            raise ConfigError(f"fault_tolerance_band low {low} exceeds high {high}")
        if self.review_period not in REVIEW_PERIODS:
            raise ConfigError(f"review_period must be one of {REVIEW_PERIODS}, got {self.review_period!r}")


@dataclass(frozen=True)
class ServiceConfig:
    listen: str = "127.0.0.1:8321"
    data_dir: str | None = None
    api_tokens: dict[str, str] = field(default_factory=lambda: {"dev-token": "admin"})
    sla: SlaConfig = field(default_factory=SlaConfig)
    gate_checklists: dict[str, list[str]] = field(default_factory=lambda: dict(DEFAULT_GATE_CHECKLISTS))
    min_quotations: int = 2
    currency: str = "INR"
    notification_sink: str = "memory"
    notification_sink_path: str | None = None
    replay_recovery: bool = False

    @property
    def log_path(self) -> str | None:
        if self.data_dir is None:
            return None
        return os.path.join(self.data_dir, "events.log")

    def validate(self) -> None:
        host, sep, port = self.listen.rpartition(":")
        if not sep or not host or not port.isdigit():
            raise ConfigError(f"listen must look like host:port, got {self.listen!r}")
        if not self.api_tokens:
            raise ConfigError("api_tokens must name at least one token -> actor entry")
        if self.min_quotations < 1:
            raise ConfigError(f"min_quotations must be >= 1, got {self.min_quotations}")
        unknown = set(self.gate_checklists) - set(PHASE_ORDER)
        if unknown:
            raise ConfigError(f"gate_checklists names unknown phases: {sorted(unknown)}")
        missing = set(PHASE_ORDER) - set(self.gate_checklists)
        if missing:
            raise ConfigError(f"gate_checklists missing phases: {sorted(missing)}")
        for phase, kinds in self.gate_checklists.items():
            if any(not isinstance(k, str) or not k for k in kinds):
                raise ConfigError(f"gate checklist for {phase} contains an empty kind")
        if self.notification_sink not in ("memory", "file"):
            raise ConfigError(f"notification_sink must be 'memory' or 'file', got {self.notification_sink!r}")
        if self.notification_sink == "file" and not self.notification_sink_path:
            raise ConfigError("notification_sink 'file' requires notification_sink_path")
        self.sla.validate()


def _sla_from_dict(raw: dict[str, Any]) -> SlaConfig:
    band = raw.get("fault_tolerance_band", [0.5, 1.0])
    if not (isinstance(band, (list, tuple)) and len(band) == 2):
        raise ConfigError(f"fault_tolerance_band must be a [low, high] pair, got {band!r}")
    try:
        return SlaConfig(
            unresolved_target_pct=Fraction(str(raw.get("unresolved_target_pct", 1.0))),
            fault_tolerance_band=(Fraction(str(band[0])), Fraction(str(band[1]))),
            review_period=raw.get("review_period", "Quarterly"),
            satisfaction_review_threshold=Fraction(str(raw.get("satisfaction_review_threshold", 4))),
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad SLA numeric value: {exc}") from exc


def config_from_dict(raw: dict[str, Any]) -> ServiceConfig:
    known = {
        "listen", "data_dir", "api_tokens", "sla", "gate_checklists",
        "min_quotations", "currency", "notification_sink", "notification_sink_path",
        "replay_recovery",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    defaults = ServiceConfig()
    cfg = ServiceConfig(
        listen=os.environ.get(ENV_LISTEN, raw.get("listen", defaults.listen)),
        data_dir=os.environ.get(ENV_DATA_DIR, raw.get("data_dir")),
        api_tokens=raw.get("api_tokens", defaults.api_tokens),
        sla=_sla_from_dict(raw.get("sla", {})),
        gate_checklists={p: list(v) for p, v in raw.get("gate_checklists", DEFAULT_GATE_CHECKLISTS).items()},
        min_quotations=raw.get("min_quotations", defaults.min_quotations),
        currency=raw.get("currency", defaults.currency),
        notification_sink=raw.get("notification_sink", defaults.notification_sink),
        notification_sink_path=raw.get("notification_sink_path"),
        replay_recovery=bool(raw.get("replay_recovery", False)),
    )
    cfg.validate()
    return cfg


def load_config(path: str | None) -> ServiceConfig:
    if path is None:
        cfg = config_from_dict({})
        return cfg
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return config_from_dict(raw)
