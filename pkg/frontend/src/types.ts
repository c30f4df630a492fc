/** Wire types for the tracknlu HTTP API. */

export type FieldKindName =
  | "number"
  | "likert"
  | "single_choice"
  | "multi_choice"
  | "short_text"
  | "long_text";

export type TimeKindName = "date" | "time_point" | "time_range";

export interface FieldDef {
  name: string;
  kind: FieldKindName;
  min?: number;
  max?: number;
  options?: string[];
  description?: string;
}

export interface TimeFieldDef {
  name: string;
  kind: TimeKindName;
  description?: string;
}

export interface TrackerRecord {
  tracker_id?: string;
  name: string;
  fields: FieldDef[];
  time_field?: TimeFieldDef | null;
}

export interface SnapInfo {
  raw: string;
  option: string;
  similarity: number;
}

export interface Provenance {
  kind: "verbatim" | "choice_snapped";
  snaps: SnapInfo[];
}

export interface DroppedSegment {
  raw_name: string;
  raw_value: string;
  reason: string;
}

export interface ExtractionPayload {
  tracker_id: string;
  values: Record<string, string>;
  provenance: Record<string, Provenance>;
  dropped: DroppedSegment[];
  raw_completion: string;
}

export type ShotRole = "farthest" | "nearest" | "user";

export interface ShotAuditEntry {
  sample_id: string;
  tracker_id: string;
  role: ShotRole;
  score: number | null;
}

export interface ExtractResponse {
  request_id: string;
  tracker_id: string;
  phrase: string;
  reference_time: string | null;
  result: ExtractionPayload;
  shot_audit: ShotAuditEntry[];
}

export interface ItemRecord {
  item_id: string;
  tracker_id: string;
  values: Record<string, string>;
  created_at: string;
  source_phrase: string | null;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details: string[];
}
