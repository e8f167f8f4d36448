// Ticket queue: open/escalated/breached tabs with the per-row support
// actions. Breached expert tickets are flagged; the countdown is display
// only and runs off the API-provided deadline.

import { ForgeClient } from "../api.js";
import { guarded } from "../guard.js";
import { countdown, esc, headerRow } from "../render.js";
import type { Ticket } from "../types.js";

export type TicketAction = "analyze" | "attempt" | "resolve" | "escalate" | "close";

export interface TicketActionFields {
  rootCause?: string | null;
  attemptText?: string;
  resolution?: string;
  permanence?: string;
  toLevel?: string;
  reason?: string;
  closureKind?: string;
  approvalRef?: string | null;
}

export function actOnTicket(
  client: ForgeClient,
  ticketId: string,
  action: TicketAction,
  fields: TicketActionFields = {},
): Promise<Ticket> {
  return guarded(`ticket:${ticketId}:${action}`, () => {
    switch (action) {
      case "analyze":
        return client.analyzeTicket(ticketId, fields.rootCause ?? null);
      case "attempt":
        if (!fields.attemptText?.trim()) {
          return Promise.reject(new Error("attempt text is required"));
        }
        return client.recordAttempt(ticketId, fields.attemptText);
      case "resolve":
        if (!fields.resolution?.trim() || !fields.permanence) {
          return Promise.reject(new Error("resolution text and permanence are required"));
        }
        return client.resolveTicket(ticketId, fields.resolution, fields.permanence);
      case "escalate":
        if (!fields.toLevel || !fields.reason?.trim()) {
          return Promise.reject(new Error("target level and reason are required"));
        }
        return client.escalateTicket(ticketId, fields.toLevel, fields.reason);
      case "close":
        if (fields.closureKind === "ProcurementApproved" && !fields.approvalRef?.trim()) {
          // blocked client-side: an unresolved closure needs the approval reference
          return Promise.reject(new Error("a procurement closure needs an approval reference"));
        }
        return client.closeTicket(ticketId, fields.closureKind ?? "Solved", fields.approvalRef ?? null);
    }
  });
}

export function openQueue(client: ForgeClient): Promise<Ticket[]> {
  return client.listTickets({ queue: "priority" });
}

export function escalatedQueue(client: ForgeClient): Promise<Ticket[]> {
  return client.listTickets({ state: "Escalated" });
}

export function breachedQueue(client: ForgeClient, nowIso?: string): Promise<Ticket[]> {
  return client.breaches(nowIso);
}

const QUEUE_COLUMNS = ["Ticket", "Issue", "User / Asset", "Risk", "Scope", "State", "Level", "Deadline", "Resolution"];

export function ticketRow(ticket: Ticket, breachedIds: Set<string>, nowIso: string): string {
  const breached = breachedIds.has(ticket.id);
  const deadline = ticket.escalation_deadline
    ? `${ticket.escalation_deadline} (${countdown(ticket.escalation_deadline, nowIso)})`
    : "";
  const resolution = ticket.resolution
    ? `${ticket.resolution.text} (${ticket.resolution.permanence})`
    : "";
  const cells = [
    ticket.id,
    ticket.issue,
    `${ticket.username} / ${ticket.asset_tag}`,
    ticket.risk_level,
    ticket.scope === "Department" ? `Department: ${ticket.department}` : "SingleUser",
    ticket.state,
    ticket.escalation_level,
    deadline,
    resolution,
  ];
  return `<tr data-ticket="${esc(ticket.id)}" class="${breached ? "breached" : ""}">${cells
    .map((c) => `<td>${esc(c)}</td>`)
    .join("")}${breached ? "<td><b>EXPERT DEADLINE BREACHED</b></td>" : "<td></td>"}</tr>`;
}

export function renderTicketQueue(
  tab: "open" | "escalated" | "breached",
  tickets: Ticket[],
  breachedIds: Set<string>,
  nowIso: string,
): string {
  const rows = tickets.map((t) => ticketRow(t, breachedIds, nowIso)).join("");
  const tabs = (["open", "escalated", "breached"] as const)
    .map((name) => `<a href="#/tickets/${name}" class="${name === tab ? "active" : ""}">${name}</a>`)
    .join(" | ");
  return `
<section class="screen ticket-queue" data-tab="${esc(tab)}">
  <h2>Ticket queue</h2>
  <nav>${tabs}</nav>
  <table><thead>${headerRow([...QUEUE_COLUMNS, ""])}</thead><tbody>${rows}</tbody></table>
  ${tickets.length === 0 ? "<p>(queue is empty)</p>" : ""}
</section>`;
}
