// Vendor scorecard: quarterly and annual figures plus the renewal outcome.
// Every number shown is taken from the API response as-is.

import { ForgeClient } from "../api.js";
import { guarded } from "../guard.js";
import { esc } from "../render.js";
import type { AnnualReport, QuarterlyReport, RenewalDecision } from "../types.js";

export function recordSurveyAction(client: ForgeClient, vendorId: string, period: string, raw: string) {
  const scores = raw
    .split(",")
    .map((s) => s.trim())
    .filter(Boolean)
    .map(Number);
  if (scores.length === 0 || scores.some((s) => !Number.isInteger(s) || s < 1 || s > 5)) {
    return Promise.reject(new Error("scores must be integers from 1 to 5"));
  }
  return client.recordSurvey(vendorId, period, scores);
}

export function evaluateRenewalAction(
  client: ForgeClient,
  vendorId: string,
  year: number,
): Promise<RenewalDecision> {
  return guarded(`renewal:${vendorId}:${year}`, () => client.evaluateRenewal(vendorId, year));
}

export function renderQuarterCard(report: QuarterlyReport): string {
  const gaps = report.unresolved_reasons
    .map(
      (r) =>
        `<li>${esc(r.ticket_id)}: ${esc(r.reason ?? "no reason documented")}` +
        `${r.documentation_gap ? " <b>(documentation gap)</b>" : ""}</li>`,
    )
    .join("");
  return `
<div class="card quarter" data-period="${esc(report.period)}">
  <h3>${esc(report.vendor_id)} — ${esc(report.period)}</h3>
  <p>Tickets: ${esc(report.total_tickets)}, resolved ${esc(report.resolved)}
     (<span data-field="resolution">${esc(report.resolution_pct)}</span>%)</p>
  <p>Downtime: <span data-field="downtime">${esc(report.total_downtime_minutes)}</span> minutes</p>
  <p>Permanent-fix ratio: ${esc(report.permanent_fix_ratio)}</p>
  <p>Critical handled/resolved: ${esc(report.critical_handled)}/${esc(report.critical_resolved)}</p>
  <ul>${gaps}</ul>
</div>`;
}

export function renderAnnualCard(report: AnnualReport, decision: RenewalDecision | null): string {
  const outcome = decision
    ? `<p>Renewal outcome: <b data-field="outcome">${esc(decision.outcome)}</b>
       (rules: <span data-field="reasons">${esc(decision.reasons.join(", "))}</span>)</p>`
    : "<p>No renewal evaluation recorded yet.</p>";
  return `
<div class="card annual" data-year="${esc(report.year)}">
  <h3>${esc(report.vendor_id)} — ${esc(report.year)} annual</h3>
  <p>Tickets: ${esc(report.total_tickets)}, resolved ${esc(report.resolved)}
     (<span data-field="resolution">${esc(report.resolution_pct)}</span>%)</p>
  <p>Downtime: <span data-field="downtime">${esc(report.total_downtime_minutes)}</span> minutes</p>
  <p>Quarter resolution range: ${esc(report.min_quarter_resolution_pct)}% to ${esc(report.max_quarter_resolution_pct)}%</p>
  ${outcome}
</div>`;
}
