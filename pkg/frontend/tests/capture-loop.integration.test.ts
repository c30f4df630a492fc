// @vitest-environment jsdom
//
// Drives the real capture service (started with a fixed-text completion
// backend) through the DOM: create a tracker, capture a phrase, correct a
// field, commit, and verify the next capture's audit drawer lists the
// committed item as a user example.

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { TrackerApi } from "../src/api.js";
import { CaptureApp } from "../src/app.js";
import type { TrackerRecord } from "../src/types.js";

const PORT = 8765 + (process.pid % 500);
const BASE_URL = `http://127.0.0.1:${PORT}`;
const COMPLETION = "Exercise = push-ups | Repetitions = 3 | Intensity = lite";

let service: ChildProcess;

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt += 1) {
    try {
      const response = await fetch(`${BASE_URL}/api/trackers`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("capture service did not start");
}

beforeAll(async () => {
  const storeDir = mkdtempSync(join(tmpdir(), "tracknlu-ui-"));
  service = spawn(
    "tracknlu",
    ["serve", "--store-dir", storeDir, "--backend", `static:${COMPLETION}`,
     "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForService();
}, 30_000);

afterAll(() => {
  service?.kill();
});

const trackerRecord: TrackerRecord = {
  tracker_id: "ui-exercise",
  name: "UI Exercise",
  fields: [
    { name: "Exercise", kind: "short_text", description: "what was done" },
    { name: "Repetitions", kind: "number", description: "how many" },
    {
      name: "Intensity",
      kind: "single_choice",
      options: ["light", "moderate", "vigorous"],
      description: "how hard",
    },
  ],
};

function makeApp(): CaptureApp {
  document.body.innerHTML = '<div id="cards"></div><span id="status"></span>';
  return new CaptureApp(
    new TrackerApi(BASE_URL),
    document,
    document.getElementById("cards")!,
    document.getElementById("status")!,
  );
}

describe("capture loop against the live service", () => {
  it("runs create → capture → correct → commit → recapture with audit", async () => {
    const app = makeApp();

    const created = await app.createTracker(trackerRecord);
    expect(created.tracker_id).toBe("ui-exercise");

    // First capture: card renders with a snapped-label badge, no user shots.
    await app.capture("I did push-ups for three repetitions at light intensity");
    expect(document.querySelector(".badge-snapped")?.textContent).toBe("was: lite");
    let entries = [...document.querySelectorAll<HTMLElement>(".audit-entry")];
    expect(entries).toHaveLength(10);
    expect(entries.every((entry) => entry.dataset.role !== "user")).toBe(true);

    // Correct one field through the DOM, then commit.
    const repsInput = document.querySelector<HTMLInputElement>(
      '[data-field="Repetitions"] input',
    )!;
    repsInput.value = "5";
    repsInput.dispatchEvent(new Event("input"));
    const commitButton = document.querySelector<HTMLButtonElement>(".commit-button")!;
    expect(commitButton.disabled).toBe(false);
    const item = await app.commit();
    expect(item.values).toEqual({ Exercise: "push-ups", Repetitions: "5", Intensity: "light" });
    expect(item.source_phrase).toMatch(/push-ups/);

    // Second capture: the committed item appears in the audit drawer as a
    // user example, and the plan still totals 10 shots.
    await app.capture("more push-ups this evening");
    entries = [...document.querySelectorAll<HTMLElement>(".audit-entry")];
    expect(entries).toHaveLength(10);
    const userEntries = entries.filter((entry) => entry.dataset.role === "user");
    expect(userEntries).toHaveLength(1);
    expect(userEntries[0]?.dataset.sampleId).toBe(`user-${item.item_id}`);

    // The committed item is in the tracker timeline.
    const api = new TrackerApi(BASE_URL);
    const { items } = await api.listItems("ui-exercise");
    expect(items.map((i) => i.item_id)).toContain(item.item_id);
  }, 30_000);

  it("surfaces server validation errors without committing", async () => {
    const app = makeApp();
    await app.useTracker("ui-exercise");
    const card = await app.capture("push-ups again");
    card.edit("Repetitions", "9.5");
    expect(card.canCommit()).toBe(true); // 9.5 is a valid number client-side

    // Force an invalid value past client checks to prove server errors render.
    const api = new TrackerApi(BASE_URL);
    await expect(
      api.commitItem("ui-exercise", { Repetitions: "not-a-number" }),
    ).rejects.toMatchObject({ status: 400, code: "validation" });
  }, 30_000);
});
