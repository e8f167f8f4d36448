"""Reporting periods: quarters ("2016Q3"), half-years ("2016H1") and years ("2016").

Periods are half-open UTC intervals [start, end). Quarterly is the default
review cadence; half-yearly is available via configuration.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import ValidationFailed

_PERIOD_RE = re.compile(r"^(\d{4})(?:([QH])([1-4]))?$")


@dataclass(frozen=True)
class Period:
    label: str
    start: datetime
    end: datetime

    def contains(self, ts: datetime) -> bool:
        return self.start <= ts < self.end

    @property
    def year(self) -> int:
        return self.start.year


def _utc(year: int, month: int) -> datetime:
    return datetime(year, month, 1, tzinfo=timezone.utc)


def parse_period(label: str) -> Period:
    """Parse "2016Q3", "2016H1" or "2016" into a half-open interval."""
    m = _PERIOD_RE.match(label.strip())
    if not m:
        raise ValidationFailed("bad-period", f"unparseable period {label!r}; expected YYYY, YYYYQn or YYYYHn")
    year = int(m.group(1))
    kind, idx = m.group(2), m.group(3)
    if kind is None:
        return Period(str(year), _utc(year, 1), _utc(year + 1, 1))
    n = int(idx)
    if kind == "Q":
        start_month = 3 * (n - 1) + 1
        end = _utc(year + 1, 1) if n == 4 else _utc(year, start_month + 3)
        return Period(f"{year}Q{n}", _utc(year, start_month), end)
    if n > 2:
        raise ValidationFailed("bad-period", f"half-year index out of range in {label!r}")
    if n == 1:
        return Period(f"{year}H1", _utc(year, 1), _utc(year, 7))
    return Period(f"{year}H2", _utc(year, 7), _utc(year + 1, 1))


def quarters_of(year: int) -> list[Period]:
    return [parse_period(f"{year}Q{n}") for n in (1, 2, 3, 4)]
