/** Capture-card state: one extraction under review before commit.
 *
 * Every displayed value traces to the extraction result or to user
 * keystrokes; the card never invents values.
 */

import type {
  DroppedSegment,
  ExtractResponse,
  Provenance,
  ShotAuditEntry,
  TrackerRecord,
} from "./types.js";
import { allFields, validateValue } from "./validation.js";

export type ValueOrigin = "model" | "user";

export interface CardField {
  name: string;
  value: string;
  origin: ValueOrigin;
  provenance: Provenance | null;
  error: string | null;
}

export class CaptureCard {
  readonly phrase: string;
  readonly dropped: DroppedSegment[];
  readonly shotAudit: ShotAuditEntry[];
  readonly rawCompletion: string;
  private readonly fieldState = new Map<string, { value: string; origin: ValueOrigin }>();

  constructor(
    private readonly schema: TrackerRecord,
    extraction: ExtractResponse,
  ) {
    this.phrase = extraction.phrase;
    this.dropped = extraction.result.dropped;
    this.shotAudit = extraction.shot_audit;
    this.rawCompletion = extraction.result.raw_completion;
    for (const [name, value] of Object.entries(extraction.result.values)) {
      this.fieldState.set(name, { value, origin: "model" });
    }
    this.modelProvenance = extraction.result.provenance;
  }

  private readonly modelProvenance: Record<string, Provenance>;

  /** One row per schema field, in schema order; untouched absent fields are empty. */
  fields(): CardField[] {
    return allFields(this.schema).map((field) => {
      const state = this.fieldState.get(field.name);
      const value = state?.value ?? "";
      return {
        name: field.name,
        value,
        origin: state?.origin ?? "user",
        provenance: state?.origin === "model" ? (this.modelProvenance[field.name] ?? null) : null,
        error: value ? validateValue(field, value) : null,
      };
    });
  }

  /** Record a user keystroke; editing switches the value's origin to user. */
  edit(name: string, value: string): void {
    if (!allFields(this.schema).some((field) => field.name === name)) {
      throw new Error(`unknown field ${name}`);
    }
    if (value === "") {
      this.fieldState.delete(name);
      return;
    }
    this.fieldState.set(name, { value, origin: "user" });
  }

  /** Commit stays disabled until every shown value passes validation and
   * at least one value remains. */
  canCommit(): boolean {
    const rows = this.fields().filter((row) => row.value !== "");
    return rows.length > 0 && rows.every((row) => row.error === null);
  }

  valuesForCommit(): Record<string, string> {
    if (!this.canCommit()) {
      throw new Error("card has validation errors; commit is disabled");
    }
    const values: Record<string, string> = {};
    for (const row of this.fields()) {
      if (row.value !== "") {
        values[row.name] = row.value;
      }
    }
    return values;
  }

  /** Snapshot proving provenance: where every shown value came from. */
  originSnapshot(): Record<string, ValueOrigin> {
    const snapshot: Record<string, ValueOrigin> = {};
    for (const [name, state] of this.fieldState) {
      snapshot[name] = state.origin;
    }
    return snapshot;
  }
}
