// Strategy home: company details plus vendor registration with the
// supplier-for category dropdown.

import { ForgeClient } from "../api.js";
import { esc } from "../render.js";
import type { Project, Vendor } from "../types.js";

export const SUPPLIER_CATEGORIES = [
  "NetworkingDevice",
  "Laptops",
  "Desktops",
  "Servers",
  "Storage",
  "SecurityDevice",
];

export interface StrategyFormInput {
  companyName: string;
  organization: string;
}

export function createProjectAction(client: ForgeClient, input: StrategyFormInput): Promise<Project> {
  if (!input.companyName.trim()) {
    throw new Error("company name is required");
  }
  return client.createProject(input.companyName.trim(), input.organization.trim() || "default");
}

export function registerVendorAction(
  client: ForgeClient,
  name: string,
  contact: string,
  supplierFor: string[],
): Promise<Vendor> {
  if (supplierFor.some((c) => !SUPPLIER_CATEGORIES.includes(c))) {
    throw new Error("unknown supplier category");
  }
  return client.registerVendor(name, contact, supplierFor);
}

export function renderStrategyHome(projects: Project[], vendors: Vendor[]): string {
  const options = ["Select...", ...SUPPLIER_CATEGORIES]
    .map((c, i) => `<option value="${i === 0 ? "" : esc(c)}">${esc(c)}</option>`)
    .join("");
  const projectRows = projects
    .map(
      (p) =>
        `<li data-project="${esc(p.id)}">${esc(p.id)} — ${esc(p.name)} (${esc(p.organization)}), ` +
        `phase <b>${esc(p.current_phase)}</b></li>`,
    )
    .join("");
  const vendorRows = vendors
    .map((v) => `<li>${esc(v.id)} — ${esc(v.name)}, supplier for ${esc(v.authorized_for.join(", "))}</li>`)
    .join("");
  return `
<section class="screen strategy-home">
  <h2>Home Page (Strategy)</h2>
  <form id="project-form">
    <label>Name of the Company <input name="companyName" required></label>
    <label>Location and address <input name="location"></label>
    <label>City <input name="city"></label>
    <label>Country <input name="country"></label>
    <label>Pin Code <input name="pin"></label>
    <label>Date of commencement <input name="commencement" type="date"></label>
    <label>Organization <input name="organization" required></label>
    <button type="submit">Create project</button>
  </form>
  <form id="vendor-form">
    <h3>Vendor</h3>
    <label>Name <input name="vendorName" required></label>
    <label>Contact <input name="vendorContact"></label>
    <label>Supplier for <select name="supplierFor" multiple>${options}</select></label>
    <button type="submit">Register vendor</button>
  </form>
  <h3>Projects</h3><ul>${projectRows || "<li>(none)</li>"}</ul>
  <h3>Vendors</h3><ul>${vendorRows || "<li>(none)</li>"}</ul>
</section>`;
}
