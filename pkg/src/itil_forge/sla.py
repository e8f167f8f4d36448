"""Vendor performance: resolution rate, merged downtime, surveys, renewal rules.

All rates are exact rationals; merging makes overlapping outages of the same
service count once. A period with no tickets counts as 100% resolution (the
SLA is vacuously met), and the renewal decision is a pure function of the
consolidated report, the survey and the configured thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import timedelta
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable

from .errors import ValidationFailed
from .notifications import OutageRecord
from .periods import Period, parse_period
from .tickets import Permanence, RiskLevel, Ticket, TicketState

if TYPE_CHECKING:  # pragma: no cover
    from .config import SlaConfig

HUNDRED = Fraction(100)


class RenewalOutcome(str, Enum):
    Renew = "Renew"
    ReviewRequired = "ReviewRequired"
    Terminate = "Terminate"


@dataclass(frozen=True)
class QuarterlyReport:
    vendor_id: str
    period: str
    total_tickets: int
    resolved: int
    resolution_pct: Fraction
    total_downtime_minutes: Fraction
    permanent_fix_ratio: Fraction
    critical_handled: int
    critical_resolved: int
    unresolved_reasons: list


@dataclass(frozen=True)
class AnnualReport:
    vendor_id: str
    year: int
    total_tickets: int
    resolved: int
    resolution_pct: Fraction
    total_downtime_minutes: Fraction
    min_quarter_resolution_pct: Fraction
    max_quarter_resolution_pct: Fraction
    min_quarter_downtime_minutes: Fraction
    max_quarter_downtime_minutes: Fraction
    quarters: list


@dataclass(frozen=True)
class SatisfactionSurvey:
    period: str
    scores: list
    mean: Fraction


@dataclass(frozen=True)
class RenewalDecision:
    vendor_id: str
    year: int
    outcome: RenewalOutcome
    reasons: list


def _is_resolved(ticket: Ticket) -> bool:
    return ticket.state in (TicketState.Resolved, TicketState.Closed)


def tickets_in_period(tickets: Iterable[Ticket], period: Period) -> list[Ticket]:
    return [t for t in tickets if period.contains(t.opened_at)]


def compute_resolution_rate(tickets: Iterable[Ticket], period: Period) -> Fraction:
    """Percentage of the period's tickets resolved or closed; 100% when empty."""
    scoped = tickets_in_period(tickets, period)
    if not scoped:
        return HUNDRED
    resolved = sum(1 for t in scoped if _is_resolved(t))
    return HUNDRED * Fraction(resolved, len(scoped))


def _minutes(delta: timedelta) -> Fraction:
    micros = (delta.days * 86400 + delta.seconds) * 1_000_000 + delta.microseconds
    return Fraction(micros, 60_000_000)


def compute_downtime(outages: Iterable[OutageRecord], period: Period) -> Fraction:
    """Minutes of downtime inside the period, per-service overlaps merged."""
    by_service: dict[str, list[tuple]] = {}
    for outage in outages:
        if outage.end is None:
            continue
        if outage.end < outage.start:
            raise ValidationFailed(
                "end-before-start", f"outage {outage.id} ends before it starts"
            )
        start = max(outage.start, period.start)
        end = min(outage.end, period.end)
        if start < end:
            by_service.setdefault(outage.service, []).append((start, end))
    total = Fraction(0)
    for intervals in by_service.values():
        intervals.sort()
        merged_start, merged_end = intervals[0]
        for start, end in intervals[1:]:
            if start <= merged_end:
                merged_end = max(merged_end, end)
            else:
                total += _minutes(merged_end - merged_start)
                merged_start, merged_end = start, end
        total += _minutes(merged_end - merged_start)
    return total


def build_quarterly_report(
    vendor_id: str, period: Period, tickets: Iterable[Ticket], outages: Iterable[OutageRecord]
) -> QuarterlyReport:
    scoped = tickets_in_period(tickets, period)
    resolved = [t for t in scoped if _is_resolved(t)]
    with_resolution = [t for t in scoped if t.resolution is not None]
    permanent = [t for t in with_resolution if t.resolution.permanence == Permanence.Permanent]
    critical = [t for t in scoped if t.risk_level == RiskLevel.Critical]
    unresolved_reasons = [
        {
            "ticket_id": t.id,
            "reason": t.escalation_reason,
            "documentation_gap": t.escalation_reason is None,
        }
        for t in sorted(scoped, key=lambda t: t.id)
        if not _is_resolved(t)
    ]
    return QuarterlyReport(
        vendor_id=vendor_id,
        period=period.label,
        total_tickets=len(scoped),
        resolved=len(resolved),
        resolution_pct=compute_resolution_rate(scoped, period),
        total_downtime_minutes=compute_downtime(outages, period),
        permanent_fix_ratio=(
            Fraction(len(permanent), len(with_resolution)) if with_resolution else Fraction(0)
        ),
        critical_handled=len(critical),
        critical_resolved=sum(1 for t in critical if _is_resolved(t)),
        unresolved_reasons=unresolved_reasons,
    )


def consolidate_annual(reports: list[QuarterlyReport]) -> AnnualReport:
    """Roll four same-year quarterlies into the annual report, ticket-weighted."""
    if len(reports) != 4:
        raise ValidationFailed("bad-quarter-count", f"annual consolidation needs 4 quarterlies, got {len(reports)}")
    vendors = {r.vendor_id for r in reports}
    if len(vendors) != 1:
        raise ValidationFailed("vendor-mismatch", f"quarterlies span multiple vendors: {sorted(vendors)}")
    periods = [parse_period(r.period) for r in reports]
    year = periods[0].year
    labels = sorted(p.label for p in periods)
    if labels != [f"{year}Q{n}" for n in (1, 2, 3, 4)]:
        raise ValidationFailed(
            "bad-quarters", f"need the four consecutive quarters of one year, got {labels}"
        )
    total = sum(r.total_tickets for r in reports)
    resolved = sum(r.resolved for r in reports)
    rate = HUNDRED if total == 0 else HUNDRED * Fraction(resolved, total)
    downtimes = [r.total_downtime_minutes for r in reports]
    rates = [r.resolution_pct for r in reports]
    return AnnualReport(
        vendor_id=reports[0].vendor_id,
        year=year,
        total_tickets=total,
        resolved=resolved,
        resolution_pct=rate,
        total_downtime_minutes=sum(downtimes, Fraction(0)),
        min_quarter_resolution_pct=min(rates),
        max_quarter_resolution_pct=max(rates),
        min_quarter_downtime_minutes=min(downtimes),
        max_quarter_downtime_minutes=max(downtimes),
        quarters=sorted(r.period for r in reports),
    )


def make_survey(period: str, scores: list[int]) -> SatisfactionSurvey:
    if not scores:
        raise ValidationFailed("empty-survey", "a survey needs at least one score")
    bad = [s for s in scores if not isinstance(s, int) or not 1 <= s <= 5]
    if bad:
        raise ValidationFailed("bad-score", f"scores must be integers in 1..5, got {bad}")
    parse_period(period)
    return SatisfactionSurvey(period=period, scores=list(scores), mean=Fraction(sum(scores), len(scores)))


def evaluate_renewal(
    annual: AnnualReport, survey: SatisfactionSurvey, config: "SlaConfig"
) -> RenewalDecision:
    """Apply the renewal rule table; the severest triggered rule wins.

    R1: unresolved% above the target -> Terminate candidate.
    R2: survey mean below threshold, or unresolved% inside the fault
        tolerance band (low exclusive, high inclusive) -> ReviewRequired.
    R3: otherwise -> Renew.
    """
    if parse_period(survey.period).year != annual.year:
        raise ValidationFailed(
            "period-mismatch",
            f"survey period {survey.period} does not cover report year {annual.year}",
        )
    unresolved = HUNDRED - annual.resolution_pct
    low, high = config.fault_tolerance_band
    reasons = []
    if unresolved > config.unresolved_target_pct:
        reasons.append("R1")
    if survey.mean < config.satisfaction_review_threshold or (low < unresolved <= high):
        reasons.append("R2")
    if "R1" in reasons:
        outcome = RenewalOutcome.Terminate
    elif "R2" in reasons:
        outcome = RenewalOutcome.ReviewRequired
    else:
        reasons = ["R3"]
        outcome = RenewalOutcome.Renew
    return RenewalDecision(vendor_id=annual.vendor_id, year=annual.year, outcome=outcome, reasons=reasons)


# -------------------------------------------------------------- text views

def render_quarterly_text(report: QuarterlyReport) -> str:
    lines = [
        f"Vendor {report.vendor_id} — {report.period}",
        f"Tickets: {report.total_tickets}, resolved: {report.resolved} "
        f"({float(report.resolution_pct):.2f}%)",
        f"Downtime: {float(report.total_downtime_minutes):.1f} min",
        f"Permanent fixes: {float(report.permanent_fix_ratio):.2%}",
        f"Critical handled/resolved: {report.critical_handled}/{report.critical_resolved}",
    ]
    for item in report.unresolved_reasons:
        reason = item["reason"] or "(no reason documented — documentation gap)"
        lines.append(f"  unresolved {item['ticket_id']}: {reason}")
    return "\n".join(lines) + "\n"


def render_annual_text(report: AnnualReport) -> str:
    return (
        f"Vendor {report.vendor_id} — {report.year} annual\n"
        f"Tickets: {report.total_tickets}, resolved: {report.resolved} "
        f"({float(report.resolution_pct):.2f}%)\n"
        f"Downtime: {float(report.total_downtime_minutes):.1f} min\n"
        f"Quarter resolution range: {float(report.min_quarter_resolution_pct):.2f}% "
        f"to {float(report.max_quarter_resolution_pct):.2f}%\n"
    )
