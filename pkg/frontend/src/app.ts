// Browser shell: hash routing, token handling, event delegation to the
// screen actions. The only state that survives a refresh is the auth token.

import { ForgeClient } from "./api.js";
import { esc } from "./render.js";
import {
  createProjectAction,
  registerVendorAction,
  renderStrategyHome,
} from "./screens/strategyHome.js";
import { renderProcurementSheet } from "./screens/procurementSheet.js";
import {
  closeLopAction,
  renderApprovalInbox,
  submitApprovalAction,
  type ApprovalInput,
} from "./screens/approvalInbox.js";
import { describeNotifyError, notifyVendorAction, recordAckAction, renderVendorNotice } from "./screens/vendorNotice.js";
import { advanceAction, closeGateAction, renderTransitionDocs, submitEvidenceAction } from "./screens/transitionDocs.js";
import {
  actOnTicket,
  breachedQueue,
  escalatedQueue,
  openQueue,
  renderTicketQueue,
  type TicketAction,
} from "./screens/ticketQueue.js";
import { evaluateRenewalAction, recordSurveyAction, renderAnnualCard, renderQuarterCard } from "./screens/vendorScorecard.js";

const app = document.getElementById("app") as HTMLElement;
const status = document.getElementById("status") as HTMLElement;

function client(): ForgeClient {
  const server = localStorage.getItem("forge.server") ?? "http://127.0.0.1:8321";
  const token = localStorage.getItem("forge.token") ?? "dev-token";
  return new ForgeClient(server, token);
}

function note(message: string, isError = false): void {
  status.textContent = message;
  status.className = isError ? "error" : "ok";
}

async function render(): Promise<void> {
  const api = client();
  const [path, arg] = location.hash.replace(/^#\//, "").split("/");
  try {
    switch (path || "strategy") {
      case "strategy": {
        const [projects, vendors] = await Promise.all([api.listProjects(), api.listVendors()]);
        app.innerHTML = renderStrategyHome(projects, vendors);
        break;
      }
      case "procurement": {
        if (!arg) {
          const requests = await api.listProcurements();
          app.innerHTML = `<h2>Procurements</h2><ul>${requests
            .map((r) => `<li><a href="#/procurement/${esc(r.id)}">${esc(r.id)}</a> — ${esc(r.overall_status)}</li>`)
            .join("")}</ul>`;
          break;
        }
        app.innerHTML = renderProcurementSheet(await api.getProcurement(arg));
        break;
      }
      case "inbox": {
        app.innerHTML = renderApprovalInbox(await api.getProcurement(arg));
        break;
      }
      case "vendor-notice": {
        const [request, notices] = await Promise.all([
          api.getProcurement(arg),
          api.listNotifications({ entity_id: arg }),
        ]);
        app.innerHTML = renderVendorNotice(request, notices);
        break;
      }
      case "transition": {
        app.innerHTML = renderTransitionDocs(await api.getProject(arg));
        break;
      }
      case "tickets": {
        const tab = (arg as "open" | "escalated" | "breached") || "open";
        const nowIso = new Date().toISOString();
        const breached = await breachedQueue(api);
        const breachedIds = new Set(breached.map((t) => t.id));
        const tickets =
          tab === "open" ? await openQueue(api) : tab === "escalated" ? await escalatedQueue(api) : breached;
        app.innerHTML = renderTicketQueue(tab, tickets, breachedIds, nowIso);
        break;
      }
      case "scorecard": {
        const year = new Date().getFullYear();
        const quarters = await Promise.all(
          [1, 2, 3, 4].map((q) => api.quarterlyReport(arg, `${year}Q${q}`)),
        );
        const annual = await api.annualReport(arg, year);
        let decision = null;
        try {
          decision = await api.evaluateRenewal(arg, year);
        } catch {
          decision = null;
        }
        app.innerHTML = `<section class="screen scorecard">${quarters
          .map(renderQuarterCard)
          .join("")}${renderAnnualCard(annual, decision)}</section>`;
        break;
      }
      default:
        app.innerHTML = `<p>Unknown screen: ${esc(path)}</p>`;
    }
    note("");
  } catch (error) {
    note(error instanceof Error ? error.message : String(error), true);
  }
}

async function act(work: () => Promise<unknown>): Promise<void> {
  try {
    await work();
    note("done");
    await render();
  } catch (error) {
    note(describeNotifyError(error), true);
  }
}

document.addEventListener("submit", (event) => {
  const form = event.target as HTMLFormElement;
  event.preventDefault();
  const api = client();
  const data = new FormData(form);
  const value = (name: string) => String(data.get(name) ?? "");
  const requestId = form.closest<HTMLElement>("[data-request]")?.dataset.request ?? "";
  const projectId = form.closest<HTMLElement>("[data-project]")?.dataset.project ?? "";
  if (form.id === "project-form") {
    void act(() => createProjectAction(api, { companyName: value("companyName"), organization: value("organization") }));
  } else if (form.id === "vendor-form") {
    const supplierFor = Array.from(data.getAll("supplierFor")).map(String).filter(Boolean);
    void act(() => registerVendorAction(api, value("vendorName"), value("vendorContact"), supplierFor));
  } else if (form.classList.contains("approval-form")) {
    const input: ApprovalInput = {
      role: form.dataset.role ?? "",
      approverName: value("approverName"),
      decision: value("decision") as ApprovalInput["decision"],
      reason: value("reason"),
    };
    void act(() => submitApprovalAction(api, requestId, input));
  } else if (form.id === "ack-form") {
    void act(() => recordAckAction(api, requestId, value("message")));
  } else if (form.classList.contains("evidence-form")) {
    void act(() => submitEvidenceAction(api, projectId, form.dataset.phase ?? "", value("kind"), value("docRef")));
  } else if (form.classList.contains("ticket-action-form")) {
    const ticketId = form.dataset.ticket ?? "";
    const action = (form.dataset.action ?? "analyze") as TicketAction;
    void act(() =>
      actOnTicket(api, ticketId, action, {
        rootCause: value("rootCause") || null,
        attemptText: value("attemptText"),
        resolution: value("resolution"),
        permanence: value("permanence"),
        toLevel: value("toLevel"),
        reason: value("reason"),
        closureKind: value("closureKind"),
        approvalRef: value("approvalRef") || null,
      }),
    );
  } else if (form.id === "survey-form") {
    void act(() => recordSurveyAction(api, form.dataset.vendor ?? "", value("period"), value("scores")));
  } else if (form.id === "settings-form") {
    localStorage.setItem("forge.server", value("server"));
    localStorage.setItem("forge.token", value("token"));
    note("settings saved");
    void render();
  }
});

document.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const api = client();
  const requestId = target.closest<HTMLElement>("[data-request]")?.dataset.request ?? "";
  const projectId = target.closest<HTMLElement>("[data-project]")?.dataset.project ?? "";
  if (target.id === "close-lop") {
    void act(() => closeLopAction(api, requestId));
  } else if (target.id === "notify-vendor") {
    void act(() => notifyVendorAction(api, requestId));
  } else if (target.id === "advance") {
    void act(() => advanceAction(api, projectId));
  } else if (target.classList.contains("close-gate")) {
    void act(() => closeGateAction(api, projectId, target.dataset.phase ?? ""));
  } else if (target.id === "renewal-eval") {
    void act(() => evaluateRenewalAction(api, target.dataset.vendor ?? "", Number(target.dataset.year)));
  }
});

window.addEventListener("hashchange", () => void render());
void render();
