/** Capture-flow controller: extract → review/edit → commit, with each commit
 * feeding the next extraction's examples. */

import { ApiError, TrackerApi } from "./api.js";
import { CaptureCard } from "./card.js";
import { mountCard } from "./dom.js";
import type { ItemRecord, TrackerRecord } from "./types.js";

export class CaptureApp {
  private schema: TrackerRecord | null = null;
  private card: CaptureCard | null = null;
  private inFlight = false;

  constructor(
    private readonly api: TrackerApi,
    private readonly doc: Document,
    private readonly cardContainer: HTMLElement,
    private readonly statusBar: HTMLElement,
  ) {}

  async useTracker(trackerId: string): Promise<void> {
    this.schema = await this.api.getTracker(trackerId);
  }

  async createTracker(record: TrackerRecord): Promise<TrackerRecord> {
    const created = await this.api.createTracker(record);
    this.schema = created;
    return created;
  }

  currentCard(): CaptureCard | null {
    return this.card;
  }

  /** One in-flight extraction at a time; the previous card is replaced. */
  async capture(phrase: string): Promise<CaptureCard> {
    if (!this.schema?.tracker_id) {
      throw new Error("no tracker selected");
    }
    if (this.inFlight) {
      throw new Error("an extraction is already in flight");
    }
    this.inFlight = true;
    this.setStatus("extracting…");
    try {
      const extraction = await this.api.extract(this.schema.tracker_id, phrase);
      this.card = new CaptureCard(this.schema, extraction);
      this.render();
      this.setStatus("");
      return this.card;
    } catch (error) {
      this.showError(error);
      throw error;
    } finally {
      this.inFlight = false;
    }
  }

  edit(name: string, value: string): void {
    if (!this.card) {
      throw new Error("no capture in progress");
    }
    this.card.edit(name, value);
    this.render();
  }

  async commit(): Promise<ItemRecord> {
    if (!this.schema?.tracker_id || !this.card) {
      throw new Error("no capture in progress");
    }
    const values = this.card.valuesForCommit();
    try {
      const item = await this.api.commitItem(this.schema.tracker_id, values, this.card.phrase);
      this.card = null;
      this.cardContainer.replaceChildren();
      this.setStatus(`saved item ${item.item_id}`);
      return item;
    } catch (error) {
      this.showError(error);
      throw error;
    }
  }

  /** Abandon the current draft without committing. */
  discard(): void {
    this.card = null;
    this.cardContainer.replaceChildren();
    this.setStatus("");
  }

  private render(): void {
    if (!this.card) {
      return;
    }
    mountCard(this.doc, this.cardContainer, this.card, {
      onEdit: (name, value) => this.edit(name, value),
      onCommit: () => {
        void this.commit();
      },
    });
  }

  private setStatus(text: string): void {
    this.statusBar.textContent = text;
    this.statusBar.classList.remove("error");
  }

  private showError(error: unknown): void {
    const message =
      error instanceof ApiError
        ? `${error.message}${error.retryable ? " — retry in a moment" : ""}`
        : String(error);
    this.statusBar.textContent = message;
    this.statusBar.classList.add("error");
  }
}
