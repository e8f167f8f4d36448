// Transition documents: per-phase evidence checklist, gate closure, advance.

import { ForgeClient } from "../api.js";
import { guarded } from "../guard.js";
import { esc } from "../render.js";
import type { Project } from "../types.js";

export function submitEvidenceAction(
  client: ForgeClient,
  projectId: string,
  phase: string,
  kind: string,
  docRef: string,
): Promise<Project> {
  if (!docRef.trim()) {
    throw new Error("a document reference is required");
  }
  return client.submitEvidence(projectId, phase, kind, docRef);
}

export function closeGateAction(client: ForgeClient, projectId: string, phase: string): Promise<Project> {
  return guarded(`gate:${projectId}:${phase}`, () => client.closeGate(projectId, phase));
}

export function advanceAction(client: ForgeClient, projectId: string): Promise<Project> {
  return guarded(`advance:${projectId}`, () => client.advancePhase(projectId));
}

export function renderTransitionDocs(project: Project): string {
  const gates = project.gates
    .map((gate) => {
      const collected = gate.collected
        .map((item) => `<li>${esc(item.kind)}: ${esc(item.doc_ref)} (${esc(item.at)})</li>`)
        .join("");
      const missing = gate.missing.map((kind) => `<li class="missing">${esc(kind)}</li>`).join("");
      const active = gate.phase === project.current_phase;
      return `
  <details ${active ? "open" : ""} data-phase="${esc(gate.phase)}">
    <summary>${esc(gate.phase)} ${gate.closed ? `— closed by ${esc(gate.closed_by)}` : active ? "— current" : ""}</summary>
    <h4>Collected documentation</h4><ul>${collected || "<li>(none)</li>"}</ul>
    <h4>Missing</h4><ul data-field="missing-${esc(gate.phase)}">${missing || "<li>(none)</li>"}</ul>
    ${
      active && !gate.closed
        ? `<form class="evidence-form" data-phase="${esc(gate.phase)}">
             <input name="kind" placeholder="Evidence kind" required>
             <input name="docRef" placeholder="Document reference" required>
             <button type="submit">Attach documentation</button>
           </form>
           <button class="close-gate" data-phase="${esc(gate.phase)}">Close ${esc(gate.phase)} gate</button>`
        : ""
    }
  </details>`;
    })
    .join("");
  return `
<section class="screen transition-docs" data-project="${esc(project.id)}">
  <h2>Documentation for transition — ${esc(project.name)}</h2>
  <p>Current phase: <b data-field="phase">${esc(project.current_phase)}</b></p>
  ${gates}
  <button id="advance">Advance to next phase</button>
</section>`;
}
