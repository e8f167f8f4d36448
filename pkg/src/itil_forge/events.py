"""Append-only audit log: one JSON object per line.

Line schema: {seq, ts, actor, entity_type, entity_id, event_kind, payload}.
``seq`` is dense (1, 2, 3, ...) per log file. A batch of events produced by
one operation is written with a single flushed+fsynced write so it becomes
durable before the caller is acknowledged.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import IO, Iterator

from .errors import LogCorrupt

_REQUIRED_KEYS = ("seq", "ts", "actor", "entity_type", "entity_id", "event_kind", "payload")


@dataclass(frozen=True)
class EventDraft:
    """An event built by a command, before seq/ts/actor are stamped on."""

    entity_type: str
    entity_id: str
    event_kind: str
    payload: dict


@dataclass(frozen=True)
class AuditEvent:
    seq: int
    ts: str
    actor: str
    entity_type: str
    entity_id: str
    event_kind: str
    payload: dict

    def to_line(self) -> str:
        return json.dumps(
            {
                "seq": self.seq,
                "ts": self.ts,
                "actor": self.actor,
                "entity_type": self.entity_type,
                "entity_id": self.entity_id,
                "event_kind": self.event_kind,
                "payload": self.payload,
            },
            sort_keys=True,
            separators=(",", ":"),
        )


def now_utc() -> datetime:
    return datetime.now(timezone.utc)


def iso(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).isoformat()


def parse_ts(value: str) -> datetime:
    ts = datetime.fromisoformat(value)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _parse_line(line: str, line_no: int) -> AuditEvent:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise LogCorrupt(line_no, f"not valid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise LogCorrupt(line_no, "event is not a JSON object")
    missing = [k for k in _REQUIRED_KEYS if k not in obj]
    if missing:
        raise LogCorrupt(line_no, f"missing keys {missing}")
    if not isinstance(obj["seq"], int):
        raise LogCorrupt(line_no, "seq is not an integer")
    if not isinstance(obj["payload"], dict):
        raise LogCorrupt(line_no, "payload is not an object")
    return AuditEvent(
        seq=obj["seq"],
        ts=obj["ts"],
        actor=obj["actor"],
        entity_type=obj["entity_type"],
        entity_id=obj["entity_id"],
        event_kind=obj["event_kind"],
        payload=obj["payload"],
    )


def read_events(path: str, *, recover_torn_tail: bool = False) -> Iterator[AuditEvent]:
    """Yield events from a log file, enforcing dense ascending seq.

    A corrupt or truncated line raises :class:`LogCorrupt` naming the
    1-based line number. With ``recover_torn_tail`` a *final* unparseable
    line (a torn write from a crash) is silently dropped instead; corruption
    anywhere else still raises.
    """
    expected_seq = 1
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    # A well-formed log ends with "\n", so the final split element is "".
    if lines and lines[-1] == "":
        lines.pop()
        trailing_newline = True
    else:
        trailing_newline = False
    for idx, line in enumerate(lines):
        line_no = idx + 1
        is_last = idx == len(lines) - 1
        try:
            if is_last and not trailing_newline:
                raise LogCorrupt(line_no, "truncated final line (no newline)")
            event = _parse_line(line, line_no)
        except LogCorrupt:
            if recover_torn_tail and is_last:
                return
            raise
        if event.seq != expected_seq:
            raise LogCorrupt(line_no, f"seq {event.seq} where {expected_seq} expected")
        expected_seq += 1
        yield event


class EventLog:
    """Single-writer appender. ``path=None`` keeps events in memory only."""

    def __init__(self, path: str | None):
        self.path = path
        self._fh: IO[str] | None = None
        self._next_seq = 1
        self.events: list[AuditEvent] = []
        if path is not None:
            os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
            self._fh = open(path, "a", encoding="utf-8")

    @property
    def next_seq(self) -> int:
        return self._next_seq

    def note_replayed(self, event: AuditEvent) -> None:
        """Account for an event already on disk (startup replay)."""
        self.events.append(event)
        self._next_seq = event.seq + 1

    def append_batch(self, actor: str, ts: str, drafts: list[EventDraft]) -> tuple[int, int]:
        """Stamp, persist and record a batch; returns (first_seq, last_seq).

        The whole batch is written with a single write+flush+fsync so it is
        durable, in full, before control returns.
        """
        if not drafts:
            raise ValueError("empty event batch")
        stamped = [
            AuditEvent(
                seq=self._next_seq + i,
                ts=ts,
                actor=actor,
                entity_type=d.entity_type,
                entity_id=d.entity_id,
                event_kind=d.event_kind,
                payload=d.payload,
            )
            for i, d in enumerate(drafts)
        ]
        if self._fh is not None:
            self._fh.write("".join(ev.to_line() + "\n" for ev in stamped))
            self._fh.flush()
            os.fsync(self._fh.fileno())
        self.events.extend(stamped)
        first = self._next_seq
        self._next_seq += len(stamped)
        return first, self._next_seq - 1

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None
