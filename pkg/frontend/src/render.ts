import type { AgreementPanelState } from "./agreement.js";
import type { SessionSnapshot } from "./state.js";

function el<T extends HTMLElement>(root: ParentNode, id: string): T {
  const node = root.querySelector(`#${id}`);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

/** Right-to-left rendering for Perso-Arabic script. */
export function textDirection(language: string): "rtl" | "ltr" {
  return language.toLowerCase() === "urdu" ? "rtl" : "ltr";
}

export function renderSession(root: ParentNode, snapshot: SessionSnapshot): void {
  const card = el<HTMLElement>(root, "task-card");
  const completion = el<HTMLElement>(root, "completion");
  const banner = el<HTMLElement>(root, "status-banner");
  const hatefulBtn = el<HTMLButtonElement>(root, "btn-hateful");
  const notHatefulBtn = el<HTMLButtonElement>(root, "btn-not-hateful");
  const undoBtn = el<HTMLButtonElement>(root, "btn-undo");

  el<HTMLElement>(root, "progress-self").textContent =
    `${snapshot.labeledCount} / ${snapshot.total} labeled`;

  banner.hidden = snapshot.phase !== "error" && snapshot.lastError === null;
  if (!banner.hidden) {
    el<HTMLElement>(root, "status-message").textContent =
      `${snapshot.lastError ?? "request failed"} — your progress is saved`;
  }

  completion.hidden = snapshot.phase !== "done";
  if (snapshot.phase === "done") {
    el<HTMLElement>(root, "completion-count").textContent =
      `All done — ${snapshot.labeledCount} tweets labeled. Thank you!`;
  }

  card.hidden = snapshot.phase !== "task";
  if (snapshot.phase === "task" && snapshot.task) {
    const text = el<HTMLElement>(root, "task-text");
    text.textContent = snapshot.task.text;
    text.dir = textDirection(snapshot.task.language);
    el<HTMLElement>(root, "task-language").textContent = snapshot.task.language;
    el<HTMLElement>(root, "task-id").textContent = snapshot.task.id;
    el<HTMLElement>(root, "guidelines-text").textContent = snapshot.task.guidelines;
  }

  const busy = snapshot.submitting || snapshot.phase !== "task";
  hatefulBtn.disabled = busy;
  notHatefulBtn.disabled = busy;
  undoBtn.disabled = !snapshot.canUndo || snapshot.submitting;
}

export function renderAgreement(root: ParentNode, state: AgreementPanelState): void {
  const kappaValue = el<HTMLElement>(root, "kappa-value");
  const kappaBand = el<HTMLElement>(root, "kappa-band");
  const kappaItems = el<HTMLElement>(root, "kappa-items");
  const staleBadge = el<HTMLElement>(root, "agreement-stale");

  staleBadge.hidden = !state.stale;
  if (state.agreement) {
    const { kappa, interpretation, item_count, annotator_count } = state.agreement;
    kappaValue.textContent = kappa === null ? "—" : kappa.toFixed(3);
    // Band wording is rendered verbatim from the server response.
    kappaBand.textContent = interpretation ?? "awaiting complete items";
    kappaItems.textContent = `${item_count} items × ${annotator_count} annotators`;
  }

  const table = el<HTMLElement>(root, "progress-table");
  if (state.progress) {
    table.replaceChildren();
    for (const [annotator, count] of Object.entries(state.progress.per_annotator)) {
      const row = table.ownerDocument!.createElement("div");
      row.className = "progress-row";
      row.textContent = `${annotator}: ${count} / ${state.progress.total}`;
      table.appendChild(row);
    }
  }
}
