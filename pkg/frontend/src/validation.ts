/** Client-side validation mirroring the service's schema and wire-format
 * rules, so commits that the server would reject are blocked locally. */

import type { FieldDef, TimeFieldDef, TrackerRecord } from "./types.js";

/** Canonical comparison form: trimmed and case-folded. */
export function canon(text: string): string {
  return text.trim().toLowerCase();
}

const NUMBER_RE = /^-?\d+(\.\d+)?$/;
const INTEGER_RE = /^-?\d+$/;
const DATE_RE = /^\d{4}-\d{2}-\d{2}$/;
const TIME_POINT_RE = /^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}$/;

const LIKERT_MAX_SPAN = 20;

function isRealDate(wire: string): boolean {
  const parsed = new Date(`${wire}T00:00`);
  return !Number.isNaN(parsed.getTime()) && wire === parsed.toISOString().slice(0, 10);
}

function isRealTimePoint(wire: string): boolean {
  if (!TIME_POINT_RE.test(wire)) {
    return false;
  }
  return isRealDate(wire.slice(0, 10)) && wire.slice(11, 13) < "24" && wire.slice(14, 16) < "60";
}

/** Validate a tracker definition; returns human-readable problems. */
export function validateTracker(record: TrackerRecord): string[] {
  const problems: string[] = [];
  if (!record.name.trim()) {
    problems.push("tracker name must be non-empty");
  }
  if (record.fields.length === 0) {
    problems.push("tracker needs at least one field");
  }
  const seen = new Set<string>();
  const allFields: (FieldDef | TimeFieldDef)[] = [...record.fields];
  if (record.time_field) {
    allFields.push(record.time_field);
  }
  for (const field of allFields) {
    if (!field.name.trim()) {
      problems.push("field name must be non-empty");
      continue;
    }
    const key = canon(field.name);
    if (seen.has(key)) {
      problems.push(`duplicate field name: ${field.name}`);
    }
    seen.add(key);
  }
  for (const field of record.fields) {
    problems.push(...validateFieldDef(field));
  }
  return problems;
}

function validateFieldDef(field: FieldDef): string[] {
  const problems: string[] = [];
  if (field.kind === "likert") {
    if (field.min === undefined || field.max === undefined) {
      problems.push(`${field.name}: scale needs min and max`);
    } else if (!Number.isInteger(field.min) || !Number.isInteger(field.max)) {
      problems.push(`${field.name}: scale bounds must be integers`);
    } else if (field.min >= field.max) {
      problems.push(`${field.name}: scale min must be below max`);
    } else if (field.max - field.min > LIKERT_MAX_SPAN) {
      problems.push(`${field.name}: scale span must be at most ${LIKERT_MAX_SPAN}`);
    }
  }
  if (field.kind === "single_choice" || field.kind === "multi_choice") {
    const options = field.options ?? [];
    const unique = new Set(options.map(canon));
    if (unique.size < 2) {
      problems.push(`${field.name}: needs at least two distinct options`);
    }
    if (options.some((option) => !option.trim())) {
      problems.push(`${field.name}: options must be non-empty`);
    }
  }
  return problems;
}

/** Validate one wire value against its field; null means valid. */
export function validateValue(field: FieldDef | TimeFieldDef, wire: string): string | null {
  const value = wire.trim();
  if (!value) {
    return "value must be non-empty (clear the field to omit it)";
  }
  switch (field.kind) {
    case "number":
      return NUMBER_RE.test(value) ? null : "must be a number";
    case "likert": {
      const def = field as FieldDef;
      if (!INTEGER_RE.test(value)) {
        return "must be a whole number";
      }
      const n = Number(value);
      if (def.min !== undefined && def.max !== undefined && (n < def.min || n > def.max)) {
        return `must be between ${def.min} and ${def.max}`;
      }
      return null;
    }
    case "single_choice": {
      const options = (field as FieldDef).options ?? [];
      return options.some((option) => canon(option) === canon(value))
        ? null
        : `must be one of: ${options.join(", ")}`;
    }
    case "multi_choice": {
      const options = (field as FieldDef).options ?? [];
      const labels = value.split(", ").map(canon);
      if (labels.some((label) => !label)) {
        return "labels must be separated by a comma and a space";
      }
      const bad = labels.filter((label) => !options.some((option) => canon(option) === label));
      return bad.length === 0 ? null : `unknown options: ${bad.join(", ")}`;
    }
    case "short_text":
    case "long_text":
      return null;
    case "date":
      return DATE_RE.test(value) && isRealDate(value) ? null : "must be YYYY-MM-DD";
    case "time_point":
      return isRealTimePoint(value) ? null : "must be YYYY-MM-DDTHH:MM";
    case "time_range": {
      const parts = value.split(" to ");
      if (parts.length !== 2 || !isRealTimePoint(parts[0]!) || !isRealTimePoint(parts[1]!)) {
        return "must be YYYY-MM-DDTHH:MM to YYYY-MM-DDTHH:MM";
      }
      return parts[0]! <= parts[1]! ? null : "range start must not be after its end";
    }
    default:
      return "unknown field kind";
  }
}

/** All fields of a tracker, with the time field last, matching server order. */
export function allFields(record: TrackerRecord): (FieldDef | TimeFieldDef)[] {
  const fields: (FieldDef | TimeFieldDef)[] = [...record.fields];
  if (record.time_field) {
    fields.push(record.time_field);
  }
  return fields;
}

export function fieldByName(
  record: TrackerRecord,
  name: string,
): FieldDef | TimeFieldDef | undefined {
  return allFields(record).find((field) => canon(field.name) === canon(name));
}
