// Vendor notice: approval notification dispatch and the acknowledgment banner
// marked to management and finance.

import { ApiError, ForgeClient } from "../api.js";
import { guarded } from "../guard.js";
import { esc } from "../render.js";
import type { NotificationView, Procurement } from "../types.js";

export function notifyVendorAction(client: ForgeClient, requestId: string): Promise<NotificationView> {
  return guarded(`notify:${requestId}`, () => client.notifyVendor(requestId));
}

export async function recordAckAction(
  client: ForgeClient,
  requestId: string,
  message: string,
): Promise<Procurement> {
  return client.recordVendorAck(requestId, message);
}

export function describeNotifyError(error: unknown): string {
  if (error instanceof ApiError && error.code === "already-notified") {
    return "Vendor already notified for this request.";
  }
  return error instanceof Error ? error.message : String(error);
}

export function renderVendorNotice(request: Procurement, notices: NotificationView[]): string {
  const approvalNote = notices.find((n) => n.kind === "VendorApproval" && n.entity_id === request.id);
  const ack = request.vendor_ack;
  return `
<section class="screen vendor-notice" data-request="${esc(request.id)}">
  <h2>Vendor — Notification (${esc(request.id)})</h2>
  <p>Vendor: ${esc(request.selected_vendor ?? "not selected")}</p>
  <p>Status: <b data-field="overall">${esc(request.overall_status)}</b></p>
  ${
    approvalNote
      ? `<p data-field="notice">Notification sent ${esc(approvalNote.created_at)} to ${esc(
          approvalNote.audience.join(", "),
        )}.<br>Note: Marked to management and finance also</p>`
      : '<button id="notify-vendor">Send notification of approval to vendor</button>'
  }
  ${
    ack
      ? `<p data-field="ack">Message from Vendor: ${esc(ack.message)}<br>` +
        `*All has been seen by the vendor on ${esc(ack.at)} — Notification</p>`
      : `<form id="ack-form"><input name="message" placeholder="Message from Vendor">
         <button type="submit">Record acknowledgment</button></form>`
  }
</section>`;
}
