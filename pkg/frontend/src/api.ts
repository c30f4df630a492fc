/** Typed fetch client for the tracknlu capture service. */

import type {
  ApiErrorBody,
  ExtractResponse,
  ItemRecord,
  TrackerRecord,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly details: string[];
  readonly retryAfterSeconds: number | null;

  constructor(status: number, body: ApiErrorBody, retryAfterSeconds: number | null) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.code = body.code;
    this.details = body.details ?? [];
    this.retryAfterSeconds = retryAfterSeconds;
  }

  get retryable(): boolean {
    return this.status === 503;
  }
}

async function asError(response: Response): Promise<ApiError> {
  let body: ApiErrorBody = { code: "unknown", message: response.statusText, details: [] };
  try {
    body = (await response.json()) as ApiErrorBody;
  } catch {
    // non-JSON error body; keep the status text
  }
  const retryAfter = response.headers.get("retry-after");
  return new ApiError(response.status, body, retryAfter ? Number(retryAfter) : null);
}

export class TrackerApi {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, payload?: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: payload === undefined ? undefined : { "Content-Type": "application/json" },
      body: payload === undefined ? undefined : JSON.stringify(payload),
    });
    if (!response.ok) {
      throw await asError(response);
    }
    return (await response.json()) as T;
  }

  createTracker(record: TrackerRecord): Promise<TrackerRecord> {
    return this.request("POST", "/api/trackers", record);
  }

  listTrackers(): Promise<{ trackers: TrackerRecord[] }> {
    return this.request("GET", "/api/trackers");
  }

  getTracker(trackerId: string): Promise<TrackerRecord> {
    return this.request("GET", `/api/trackers/${encodeURIComponent(trackerId)}`);
  }

  extract(
    trackerId: string,
    phrase: string,
    referenceTime?: string,
  ): Promise<ExtractResponse> {
    const payload: Record<string, string> = { phrase };
    if (referenceTime) {
      payload.reference_time = referenceTime;
    }
    return this.request("POST", `/api/trackers/${encodeURIComponent(trackerId)}/extract`, payload);
  }

  commitItem(
    trackerId: string,
    values: Record<string, string>,
    sourcePhrase?: string,
  ): Promise<ItemRecord> {
    const payload: Record<string, unknown> = { values };
    if (sourcePhrase) {
      payload.source_phrase = sourcePhrase;
    }
    return this.request("POST", `/api/trackers/${encodeURIComponent(trackerId)}/items`, payload);
  }

  listItems(trackerId: string): Promise<{ items: ItemRecord[] }> {
    return this.request("GET", `/api/trackers/${encodeURIComponent(trackerId)}/items`);
  }

  correctItem(itemId: string, values: Record<string, string>): Promise<ItemRecord> {
    return this.request("PATCH", `/api/items/${encodeURIComponent(itemId)}`, { values });
  }
}
