/** Tracker-builder form model: collects typed field definitions and blocks
 * submission until the definition passes local validation. */

import type { FieldDef, FieldKindName, TimeKindName, TrackerRecord } from "./types.js";
import { validateTracker } from "./validation.js";

export interface BuilderFieldRow {
  name: string;
  kind: FieldKindName;
  min: string;
  max: string;
  options: string; // comma-separated in the form
  description: string;
}

export const FIELD_KINDS: FieldKindName[] = [
  "number",
  "likert",
  "single_choice",
  "multi_choice",
  "short_text",
  "long_text",
];

export const TIME_KINDS: TimeKindName[] = ["date", "time_point", "time_range"];

export function emptyRow(): BuilderFieldRow {
  return { name: "", kind: "short_text", min: "1", max: "5", options: "", description: "" };
}

export class TrackerBuilder {
  name = "";
  rows: BuilderFieldRow[] = [emptyRow()];
  timeFieldName = "";
  timeKind: TimeKindName = "time_point";

  addRow(): void {
    this.rows.push(emptyRow());
  }

  removeRow(index: number): void {
    this.rows.splice(index, 1);
  }

  /** The tracker record the current form state describes. */
  toRecord(): TrackerRecord {
    const record: TrackerRecord = {
      name: this.name.trim(),
      fields: this.rows.map(rowToField),
    };
    if (this.timeFieldName.trim()) {
      record.time_field = { name: this.timeFieldName.trim(), kind: this.timeKind };
    }
    return record;
  }

  problems(): string[] {
    return validateTracker(this.toRecord());
  }

  canSubmit(): boolean {
    return this.problems().length === 0;
  }
}

function rowToField(row: BuilderFieldRow): FieldDef {
  const field: FieldDef = { name: row.name.trim(), kind: row.kind };
  if (row.description.trim()) {
    field.description = row.description.trim();
  }
  if (row.kind === "likert") {
    field.min = Number(row.min);
    field.max = Number(row.max);
  }
  if (row.kind === "single_choice" || row.kind === "multi_choice") {
    field.options = row.options
      .split(",")
      .map((option) => option.trim())
      .filter((option) => option.length > 0);
  }
  return field;
}
