// HTTP client for the itil-forge API; the console's only data source.

import type {
  AnnualReport,
  Asset,
  Change,
  NotificationView,
  Procurement,
  Project,
  QuarterlyReport,
  QuotationLine,
  RenewalDecision,
  Ticket,
  Vendor,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public details: unknown,
  ) {
    super(message);
  }
}

export class ForgeClient {
  constructor(
    private baseUrl: string,
    private token: string,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    params?: Record<string, string>,
  ): Promise<T> {
    const url = new URL(this.baseUrl + path);
    for (const [key, value] of Object.entries(params ?? {})) {
      url.searchParams.set(key, value);
    }
    const response = await fetch(url, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        "Content-Type": "application/json",
      },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = "http-error";
      let message = response.statusText;
      let details: unknown = {};
      try {
        const parsed = (await response.json()) as { code?: string; message?: string; details?: unknown };
        code = parsed.code ?? code;
        message = parsed.message ?? message;
        details = parsed.details ?? details;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, message, details);
    }
    const contentType = response.headers.get("content-type") ?? "";
    if (contentType.includes("application/json")) {
      return (await response.json()) as T;
    }
    return (await response.text()) as unknown as T;
  }

  health() {
    return this.request<{ status: string; events: number }>("GET", "/health");
  }

  // projects
  createProject(name: string, organization: string) {
    return this.request<Project>("POST", "/projects", { name, organization });
  }
  listProjects() {
    return this.request<Project[]>("GET", "/projects");
  }
  getProject(id: string) {
    return this.request<Project>("GET", `/projects/${id}`);
  }
  submitEvidence(id: string, phase: string, kind: string, docRef: string) {
    return this.request<Project>("POST", `/projects/${id}/evidence`, {
      phase,
      kind,
      doc_ref: docRef,
    });
  }
  closeGate(id: string, phase: string) {
    return this.request<Project>("POST", `/projects/${id}/gates/${phase}/close`, {});
  }
  advancePhase(id: string) {
    return this.request<Project>("POST", `/projects/${id}/advance`, {});
  }

  // vendors and procurement
  registerVendor(name: string, contact: string, authorizedFor: string[]) {
    return this.request<Vendor>("POST", "/vendors", {
      name,
      contact,
      authorized_for: authorizedFor,
    });
  }
  listVendors() {
    return this.request<Vendor[]>("GET", "/vendors");
  }
  submitRequirement(projectId: string, requirementDoc: string) {
    return this.request<Procurement>("POST", "/procurements", {
      project_id: projectId,
      requirement_doc: requirementDoc,
    });
  }
  getProcurement(id: string) {
    return this.request<Procurement>("GET", `/procurements/${id}`);
  }
  listProcurements() {
    return this.request<Procurement[]>("GET", "/procurements");
  }
  attachQuotation(id: string, vendorId: string, lines: Partial<QuotationLine>[]) {
    return this.request<Procurement>("POST", `/procurements/${id}/quotations`, {
      vendor_id: vendorId,
      lines,
    });
  }
  selectVendor(id: string, vendorId: string, justification: string) {
    return this.request<Procurement>("POST", `/procurements/${id}/select`, {
      vendor_id: vendorId,
      justification,
    });
  }
  recordApproval(id: string, role: string, approverName: string, status: string, reason: string) {
    return this.request<Procurement>("POST", `/procurements/${id}/approvals`, {
      role,
      approver_name: approverName,
      status,
      reason,
    });
  }
  closeLop(id: string) {
    return this.request<Procurement>("POST", `/procurements/${id}/close-lop`, {});
  }
  notifyVendor(id: string) {
    return this.request<NotificationView>("POST", `/procurements/${id}/notify-vendor`, {});
  }
  recordVendorAck(id: string, message: string) {
    return this.request<Procurement>("POST", `/procurements/${id}/vendor-ack`, { message });
  }

  // assets
  registerAsset(fields: {
    device: string;
    category: string;
    vendor_id: string;
    location: string;
    purchase_date: string;
    warranty_months: number;
  }) {
    return this.request<Asset>("POST", "/assets", fields);
  }
  listAssets() {
    return this.request<Asset[]>("GET", "/assets");
  }

  // changes
  listChanges() {
    return this.request<Change[]>("GET", "/changes");
  }

  // tickets
  openTicket(fields: {
    category: string;
    issue: string;
    username: string;
    asset_tag: string;
    risk_level: string;
    scope: string;
    department?: string | null;
  }) {
    return this.request<Ticket>("POST", "/tickets", fields);
  }
  listTickets(params?: { state?: string; queue?: string }) {
    const query: Record<string, string> = {};
    if (params?.state) query.state = params.state;
    if (params?.queue) query.queue = params.queue;
    return this.request<Ticket[]>("GET", "/tickets", undefined, query);
  }
  getTicket(id: string) {
    return this.request<Ticket>("GET", `/tickets/${id}`);
  }
  breaches(nowIso?: string) {
    return this.request<Ticket[]>("GET", "/tickets/breaches", undefined, nowIso ? { now: nowIso } : {});
  }
  analyzeTicket(id: string, rootCause?: string | null) {
    return this.request<Ticket>("POST", `/tickets/${id}/analyze`, { root_cause: rootCause ?? null });
  }
  recordAttempt(id: string, text: string) {
    return this.request<Ticket>("POST", `/tickets/${id}/attempts`, { text });
  }
  resolveTicket(id: string, resolution: string, permanence: string) {
    return this.request<Ticket>("POST", `/tickets/${id}/resolve`, { resolution, permanence });
  }
  escalateTicket(id: string, toLevel: string, reason: string) {
    return this.request<Ticket>("POST", `/tickets/${id}/escalate`, { to_level: toLevel, reason });
  }
  closeTicket(id: string, closureKind: string, approvalRef?: string | null) {
    return this.request<Ticket>("POST", `/tickets/${id}/close`, {
      closure_kind: closureKind,
      approval_ref: approvalRef ?? null,
    });
  }

  // vendor scorecards
  quarterlyReport(vendorId: string, period: string) {
    return this.request<QuarterlyReport>("GET", `/vendors/${vendorId}/reports`, undefined, { period });
  }
  annualReport(vendorId: string, year: number) {
    return this.request<AnnualReport>("GET", `/vendors/${vendorId}/reports/annual`, undefined, {
      year: String(year),
    });
  }
  recordSurvey(vendorId: string, period: string, scores: number[]) {
    return this.request<{ vendor_id: string; period: string; scores: number[]; mean: number }>(
      "POST",
      `/vendors/${vendorId}/surveys`,
      { period, scores },
    );
  }
  evaluateRenewal(vendorId: string, year: number) {
    return this.request<RenewalDecision>("POST", `/vendors/${vendorId}/renewal-evaluation`, { year });
  }

  // outages and notifications
  registerContacts(service: string, users: string[]) {
    return this.request<{ service: string; users: string[] }>("POST", "/outages/contacts", {
      service,
      users,
    });
  }
  listNotifications(params?: { kind?: string; entity_id?: string }) {
    const query: Record<string, string> = {};
    if (params?.kind) query.kind = params.kind;
    if (params?.entity_id) query.entity_id = params.entity_id;
    return this.request<NotificationView[]>("GET", "/notifications", undefined, query);
  }
}
