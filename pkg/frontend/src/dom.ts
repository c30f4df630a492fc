/** DOM rendering for the capture card and its shot-audit drawer. */

import type { CaptureCard } from "./card.js";
import type { ShotAuditEntry } from "./types.js";

export interface CardCallbacks {
  onEdit(name: string, value: string): void;
  onCommit(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderCaptureCard(
  doc: Document,
  card: CaptureCard,
  callbacks: CardCallbacks,
): HTMLElement {
  const root = el(doc, "section", "capture-card");
  root.append(el(doc, "p", "phrase", `“${card.phrase}”`));

  const grid = el(doc, "div", "field-grid");
  for (const field of card.fields()) {
    const row = el(doc, "div", "field-row");
    row.dataset.field = field.name;

    const label = el(doc, "label", "field-name", field.name);
    const input = el(doc, "input", "field-value") as HTMLInputElement;
    input.value = field.value;
    input.setAttribute("aria-label", field.name);
    input.addEventListener("input", () => callbacks.onEdit(field.name, input.value));
    row.append(label, input);

    if (field.provenance?.kind === "choice_snapped") {
      for (const snap of field.provenance.snaps) {
        row.append(el(doc, "span", "badge badge-snapped", `was: ${snap.raw}`));
      }
    } else if (field.origin === "model" && field.value) {
      row.append(el(doc, "span", "badge badge-verbatim", "verbatim"));
    } else if (field.origin === "user" && field.value) {
      row.append(el(doc, "span", "badge badge-edited", "edited"));
    }

    if (field.error) {
      row.append(el(doc, "span", "field-error", field.error));
    }
    grid.append(row);
  }
  root.append(grid);

  if (card.dropped.length > 0) {
    const dropped = el(doc, "ul", "dropped-list");
    for (const segment of card.dropped) {
      dropped.append(
        el(doc, "li", "dropped-item", `${segment.raw_name || "(segment)"}: ${segment.reason}`),
      );
    }
    root.append(el(doc, "h4", undefined, "Not captured"), dropped);
  }

  root.append(renderAuditDrawer(doc, card.shotAudit));

  const commit = el(doc, "button", "commit-button", "Commit") as HTMLButtonElement;
  commit.disabled = !card.canCommit();
  commit.addEventListener("click", () => {
    if (card.canCommit()) {
      callbacks.onCommit();
    }
  });
  root.append(commit);
  return root;
}

export function renderAuditDrawer(doc: Document, audit: ShotAuditEntry[]): HTMLElement {
  const drawer = el(doc, "details", "audit-drawer");
  drawer.append(el(doc, "summary", undefined, `Examples used (${audit.length})`));
  const list = el(doc, "ol", "audit-list");
  for (const entry of audit) {
    const item = el(doc, "li", `audit-entry audit-${entry.role}`);
    item.dataset.sampleId = entry.sample_id;
    item.dataset.role = entry.role;
    const score = entry.score === null ? "" : ` (${entry.score.toFixed(3)})`;
    item.textContent = `[${entry.role}] ${entry.sample_id} — ${entry.tracker_id}${score}`;
    list.append(item);
  }
  drawer.append(list);
  return drawer;
}

/** Replace the container's card with a freshly rendered one. */
export function mountCard(
  doc: Document,
  container: HTMLElement,
  card: CaptureCard,
  callbacks: CardCallbacks,
): void {
  container.replaceChildren(renderCaptureCard(doc, card, callbacks));
}
