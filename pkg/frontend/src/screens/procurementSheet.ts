// Procurement sheet: the 13-column quotation grid plus requirement,
// selection and line entry.

import { ForgeClient } from "../api.js";
import { esc, headerRow, money, row } from "../render.js";
import type { Procurement, QuotationLine } from "../types.js";

export const SHEET_COLUMNS = [
  "Sl.",
  "Device",
  "Device Type",
  "Manufacturer",
  "Propose",
  "Warranty",
  "Vendor",
  "Authorized or not",
  "Vendor contact no",
  "Location",
  "Quantity",
  "Price (in RS)",
  "Quotation person",
];

export function submitRequirementAction(client: ForgeClient, projectId: string, docRef: string) {
  if (!docRef.trim()) {
    throw new Error("requirement file reference is required");
  }
  return client.submitRequirement(projectId, docRef.trim());
}

export function attachQuotationAction(
  client: ForgeClient,
  requestId: string,
  vendorId: string,
  lines: Partial<QuotationLine>[],
) {
  if (lines.length === 0) {
    throw new Error("add at least one sheet line");
  }
  return client.attachQuotation(requestId, vendorId, lines);
}

export function selectVendorAction(
  client: ForgeClient,
  requestId: string,
  vendorId: string,
  justification: string,
) {
  return client.selectVendor(requestId, vendorId, justification);
}

function sheetRow(line: QuotationLine, currency: string): string {
  return row([
    line.serial,
    line.device,
    line.device_type,
    line.manufacturer,
    line.purpose,
    line.warranty_months,
    line.vendor_id,
    line.authorized_flag ? "Yes" : "No",
    line.vendor_contact,
    line.location,
    line.quantity,
    money(line.unit_price, currency),
    line.quotation_person,
  ]);
}

export function renderProcurementSheet(request: Procurement): string {
  const body = request.quotations
    .flatMap((q) => q.lines.map((line) => sheetRow(line, request.currency)))
    .join("");
  const totals = request.quotations
    .map(
      (q) =>
        `<li>${esc(q.vendor_id)}: total ${esc(money(q.total, request.currency))}` +
        `${request.selected_vendor === q.vendor_id ? " <b>(selected)</b>" : ""}</li>`,
    )
    .join("");
  return `
<section class="screen procurement-sheet" data-request="${esc(request.id)}">
  <h2>Procurement Sheet (For Management) — ${esc(request.id)}</h2>
  <p>Requirement details (.xls file): ${esc(request.requirement_doc)}</p>
  <table><thead>${headerRow(SHEET_COLUMNS)}</thead><tbody>${body}</tbody></table>
  <h3>Quotation totals</h3><ul>${totals || "<li>(no quotations yet)</li>"}</ul>
  <p>Overall status: <b data-field="overall">${esc(request.overall_status)}</b></p>
</section>`;
}
