/** Browser entry point: wires the builder form and capture flow to the page. */

import { TrackerApi } from "./api.js";
import { CaptureApp } from "./app.js";
import { FIELD_KINDS, TrackerBuilder, emptyRow } from "./builder.js";

function requireElement<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

function renderBuilder(builder: TrackerBuilder, onCreate: () => void): void {
  const rowsHost = requireElement<HTMLDivElement>("builder-rows");
  const problemsHost = requireElement<HTMLUListElement>("builder-problems");
  const submit = requireElement<HTMLButtonElement>("builder-submit");

  rowsHost.replaceChildren();
  builder.rows.forEach((row, index) => {
    const wrapper = document.createElement("div");
    wrapper.className = "builder-row";

    const name = document.createElement("input");
    name.placeholder = "Field name";
    name.value = row.name;
    name.addEventListener("input", () => {
      row.name = name.value;
      refresh();
    });

    const kind = document.createElement("select");
    for (const kindName of FIELD_KINDS) {
      const option = document.createElement("option");
      option.value = kindName;
      option.textContent = kindName.replace("_", " ");
      option.selected = kindName === row.kind;
      kind.append(option);
    }
    kind.addEventListener("change", () => {
      row.kind = kind.value as (typeof FIELD_KINDS)[number];
      renderBuilder(builder, onCreate);
    });

    const extra = document.createElement("input");
    if (row.kind === "likert") {
      extra.placeholder = "min..max (e.g. 1..5)";
      extra.value = `${row.min}..${row.max}`;
      extra.addEventListener("input", () => {
        const [min = "", max = ""] = extra.value.split("..");
        row.min = min;
        row.max = max;
        refresh();
      });
    } else if (row.kind === "single_choice" || row.kind === "multi_choice") {
      extra.placeholder = "options, comma-separated";
      extra.value = row.options;
      extra.addEventListener("input", () => {
        row.options = extra.value;
        refresh();
      });
    } else {
      extra.hidden = true;
    }

    const remove = document.createElement("button");
    remove.type = "button";
    remove.textContent = "✕";
    remove.addEventListener("click", () => {
      builder.removeRow(index);
      renderBuilder(builder, onCreate);
    });

    wrapper.append(name, kind, extra, remove);
    rowsHost.append(wrapper);
  });

  function refresh(): void {
    const problems = builder.problems();
    problemsHost.replaceChildren(
      ...problems.map((problem) => {
        const li = document.createElement("li");
        li.textContent = problem;
        return li;
      }),
    );
    submit.disabled = !builder.canSubmit();
  }
  refresh();
  submit.onclick = onCreate;
}

function boot(): void {
  const api = new TrackerApi("");
  const app = new CaptureApp(
    api,
    document,
    requireElement("card-container"),
    requireElement("status-bar"),
  );
  const builder = new TrackerBuilder();

  requireElement<HTMLInputElement>("builder-name").addEventListener("input", (event) => {
    builder.name = (event.target as HTMLInputElement).value;
    renderBuilder(builder, create);
  });
  requireElement<HTMLButtonElement>("builder-add-field").addEventListener("click", () => {
    builder.rows.push(emptyRow());
    renderBuilder(builder, create);
  });

  async function create(): Promise<void> {
    const created = await app.createTracker(builder.toRecord());
    requireElement("tracker-title").textContent = created.name;
  }

  requireElement<HTMLFormElement>("capture-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const input = requireElement<HTMLInputElement>("phrase-input");
    if (input.value.trim()) {
      void app.capture(input.value.trim());
    }
  });

  renderBuilder(builder, create);
}

document.addEventListener("DOMContentLoaded", boot);
