/**
 * Typed client for the annotation server.
 *
 * All record access goes over HTTP; the UI never touches the corpus
 * file. The transport is injectable so tests can run against canned
 * responses instead of a live server.
 */

export interface TypologyEntry {
  code: number;
  name: string;
  description: string;
}

export interface WireSpan {
  start: number; // codepoint offset, inclusive
  end: number; // codepoint offset, exclusive
  codes: number[];
  norm: string;
  surface?: string; // present on reads; echoed on writes as a tripwire
}

export interface WireRecord {
  id: string;
  src: string;
  tgt: string;
  tgt_norm: string;
  revision: number;
  spans: WireSpan[];
  src_normalized?: string;
}

export interface RecordSummary {
  id: string;
  src: string;
  span_count: number;
  revision: number;
}

export interface Diagnostic {
  kind: string;
  message: string;
  spans: number[];
}

export interface PreviewVariant {
  text: string;
  kept: number[];
  kept_codes: number[];
  n: number;
  pure: boolean;
}

export interface PreviewResult {
  normalized: string;
  label: string;
  truncated: boolean;
  variants: PreviewVariant[];
}

export interface SaveBody {
  expected_revision: number;
  spans: WireSpan[];
  tgt_norm?: string;
}

export type Transport = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

/** 422: the server-side validator refused the payload. */
export class ValidationRejected extends ApiError {
  constructor(readonly diagnostics: Diagnostic[]) {
    super(422, diagnostics.map((d) => d.message).join("; ") || "validation failed");
    this.name = "ValidationRejected";
  }
}

/** 409: someone else saved first; carries the server's copy for merging. */
export class StaleRevision extends ApiError {
  constructor(
    readonly expectedRevision: number,
    readonly actualRevision: number,
    readonly record: WireRecord,
  ) {
    super(409, `record moved to revision ${actualRevision}, client had ${expectedRevision}`);
    this.name = "StaleRevision";
  }
}

async function bodyOf(response: Response): Promise<any> {
  try {
    return await response.json();
  } catch {
    return null;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly transport: Transport = (url, init) => fetch(url, init),
  ) {}

  private async request(method: string, path: string, payload?: unknown): Promise<any> {
    const init: RequestInit = { method };
    if (payload !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(payload);
    }
    const response = await this.transport(this.baseUrl + path, init);
    if (response.ok) return bodyOf(response);
    const body = await bodyOf(response);
    if (response.status === 409 && body?.record) {
      throw new StaleRevision(body.expected_revision, body.actual_revision, body.record);
    }
    if (response.status === 422 && Array.isArray(body?.diagnostics)) {
      throw new ValidationRejected(body.diagnostics);
    }
    throw new ApiError(response.status, body?.error ?? `HTTP ${response.status}`);
  }

  typology(): Promise<TypologyEntry[]> {
    return this.request("GET", "/api/typology");
  }

  summaries(): Promise<RecordSummary[]> {
    return this.request("GET", "/api/corpus");
  }

  record(id: string): Promise<WireRecord> {
    return this.request("GET", `/api/records/${encodeURIComponent(id)}`);
  }

  saveRecord(id: string, body: SaveBody): Promise<WireRecord> {
    return this.request("PUT", `/api/records/${encodeURIComponent(id)}`, body);
  }

  preview(
    record: Omit<WireRecord, "src_normalized">,
    mode: "exactly_n" | "single_type" = "exactly_n",
    params: Record<string, number | boolean> = { n: 1 },
  ): Promise<PreviewResult> {
    return this.request("POST", "/api/preview", { record, mode, params });
  }
}
