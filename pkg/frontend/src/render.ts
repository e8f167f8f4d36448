// Small HTML-string helpers; screens render to strings so they stay testable.

export function esc(value: unknown): string {
  return String(value ?? "")
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function row(cells: unknown[]): string {
  return `<tr>${cells.map((c) => `<td>${esc(c)}</td>`).join("")}</tr>`;
}

export function headerRow(cells: string[]): string {
  return `<tr>${cells.map((c) => `<th>${esc(c)}</th>`).join("")}</tr>`;
}

export function money(minorUnits: number, currency: string): string {
  const sign = minorUnits < 0 ? "-" : "";
  const abs = Math.abs(minorUnits);
  const major = Math.floor(abs / 100);
  const minor = String(abs % 100).padStart(2, "0");
  return `${sign}${major}.${minor} ${currency}`;
}

// Remaining time until an escalation deadline, for display only; the
// deadline itself comes from the API untouched.
export function countdown(deadlineIso: string, nowIso: string): string {
  const remaining = (new Date(deadlineIso).getTime() - new Date(nowIso).getTime()) / 1000;
  if (remaining <= 0) {
    return "BREACHED";
  }
  const minutes = Math.floor(remaining / 60);
  const seconds = Math.floor(remaining % 60);
  return `${minutes}m ${String(seconds).padStart(2, "0")}s`;
}
