// Wire types mirroring the API's JSON responses.

export interface GateView {
  phase: string;
  required_evidence: string[];
  collected: { kind: string; doc_ref: string; at: string }[];
  missing: string[];
  closed: boolean;
  closed_by: string | null;
}

export interface Project {
  id: string;
  name: string;
  organization: string;
  current_phase: string;
  created_at: string;
  gates: GateView[];
}

export interface Vendor {
  id: string;
  name: string;
  contact: string;
  authorized_for: string[];
}

export interface QuotationLine {
  serial: number;
  device: string;
  device_type: string;
  manufacturer: string;
  purpose: string;
  warranty_months: number;
  vendor_id: string;
  authorized_flag: boolean;
  vendor_contact: string;
  location: string;
  quantity: number;
  unit_price: number;
  quotation_person: string;
}

export interface Quotation {
  vendor_id: string;
  attached_at: string;
  total: number;
  lines: QuotationLine[];
}

export interface Approval {
  role: string;
  approver_name: string;
  date: string;
  status: string;
  reason: string;
}

export interface Procurement {
  id: string;
  project_id: string;
  requirement_doc: string;
  created_at: string;
  currency: string;
  quotations: Quotation[];
  selected_vendor: string | null;
  selection_justification: string;
  approvals: Approval[];
  overall_status: string;
  lop_closed: boolean;
  vendor_ack: { message: string; at: string } | null;
}

export interface Ticket {
  id: string;
  category: string;
  issue: string;
  username: string;
  asset_tag: string;
  root_cause: string | null;
  risk_level: string;
  scope: string;
  department: string | null;
  state: string;
  escalation_level: string;
  escalation_reason: string | null;
  escalation_deadline: string | null;
  escalation_warning_at: string | null;
  resolution: { text: string; permanence: string } | null;
  opened_at: string;
  resolved_at: string | null;
  resolution_minutes: number | null;
  closed_at: string | null;
  closure_kind: string | null;
  approval_ref: string | null;
  suggestion?: string | null;
}

export interface Asset {
  tag: string;
  device: string;
  category: string;
  vendor_id: string;
  location: string;
  purchase_date: string;
  warranty_months: number;
  status: string;
}

export interface Change {
  id: string;
  project_id: string;
  target: string;
  kind: string;
  priority: string;
  downtime_estimate_minutes: number;
  state: string;
  scheduled_at: string | null;
  affected_departments: string[];
  release_delay_warning: boolean;
  test_runs: { dummy_input: string; outcome: string; completed_at: string; tester: string }[];
}

export interface QuarterlyReport {
  vendor_id: string;
  period: string;
  total_tickets: number;
  resolved: number;
  resolution_pct: number;
  total_downtime_minutes: number;
  permanent_fix_ratio: number;
  critical_handled: number;
  critical_resolved: number;
  unresolved_reasons: { ticket_id: string; reason: string | null; documentation_gap: boolean }[];
}

export interface AnnualReport {
  vendor_id: string;
  year: number;
  total_tickets: number;
  resolved: number;
  resolution_pct: number;
  total_downtime_minutes: number;
  min_quarter_resolution_pct: number;
  max_quarter_resolution_pct: number;
  min_quarter_downtime_minutes: number;
  max_quarter_downtime_minutes: number;
  quarters: string[];
}

export interface RenewalDecision {
  vendor_id: string;
  year: number;
  outcome: string;
  reasons: string[];
}

export interface NotificationView {
  id: string;
  kind: string;
  entity_id: string;
  audience: string[];
  body: string;
  created_at: string;
  delivered: boolean;
  late: boolean;
}
