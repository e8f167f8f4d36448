// Approval inbox: the four-role decision form and the overall status banner.

import { ForgeClient } from "../api.js";
import { guarded } from "../guard.js";
import { esc } from "../render.js";
import type { Procurement } from "../types.js";

export const ROLES = ["IT", "ProjectManagement", "Operations", "FinanceHead"];

export const ALL_ACCEPTED_BANNER = "All the management staff have accepted the design provided by the vendor";

export interface ApprovalInput {
  role: string;
  approverName: string;
  decision: "Approved" | "NotApproved";
  reason: string;
}

// Client-side block: a NotApproved decision never leaves the browser
// without a reason. Double submits collapse into one request.
export function submitApprovalAction(
  client: ForgeClient,
  requestId: string,
  input: ApprovalInput,
): Promise<Procurement> {
  if (input.decision === "NotApproved" && !input.reason.trim()) {
    return Promise.reject(new Error("a NotApproved decision requires a reason"));
  }
  return guarded(`approval:${requestId}:${input.role}`, () =>
    client.recordApproval(requestId, input.role, input.approverName, input.decision, input.reason),
  );
}

export function closeLopAction(client: ForgeClient, requestId: string): Promise<Procurement> {
  return guarded(`close-lop:${requestId}`, () => client.closeLop(requestId));
}

export function overallBanner(request: Procurement): string {
  if (request.overall_status === "Approved") {
    return ALL_ACCEPTED_BANNER;
  }
  if (request.overall_status === "NotApproved") {
    const objection = request.approvals.find((a) => a.status === "NotApproved");
    return `Not approved${objection ? `: ${objection.reason} (${objection.role})` : ""}`;
  }
  const decided = request.approvals.map((a) => a.role);
  const waiting = ROLES.filter((r) => !decided.includes(r));
  return `Pending — waiting on ${waiting.join(", ")}`;
}

export function renderApprovalInbox(request: Procurement): string {
  const rows = ROLES.map((role, i) => {
    const decision = request.approvals.find((a) => a.role === role);
    const status = decision
      ? `${decision.status} by ${decision.approver_name} on ${decision.date}` +
        (decision.reason ? ` — ${decision.reason}` : "")
      : "undecided";
    const form = decision
      ? ""
      : `<form class="approval-form" data-role="${esc(role)}">
           <input name="approverName" placeholder="Name of the approver" required>
           <label><input type="radio" name="decision" value="Approved" checked> Approved</label>
           <label><input type="radio" name="decision" value="NotApproved"> Not Approved</label>
           <input name="reason" placeholder="Reason">
           <button type="submit">Submit to IT-Department</button>
         </form>`;
    return `<li>${i + 1}. Approver (${esc(role)}): <span data-field="status-${esc(role)}">${esc(status)}</span>${form}</li>`;
  }).join("");
  return `
<section class="screen approval-inbox" data-request="${esc(request.id)}">
  <h2>Approval — ${esc(request.id)}</h2>
  <ol>${rows}</ol>
  <p>Overall Approval Status: <b data-field="overall">${esc(request.overall_status)}</b></p>
  <p data-field="banner">${esc(overallBanner(request))}</p>
  ${request.overall_status === "Approved" && !request.lop_closed ? '<button id="close-lop">Close LOP</button>' : ""}
  ${request.lop_closed ? "<p><b>LOP closed.</b></p>" : ""}
</section>`;
}
