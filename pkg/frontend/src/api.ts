// Thin typed client for the four /v1 endpoints. `fetch` is injected so
// tests can run against a scripted fake.

import type {
  ApiErrorBody,
  Catalog,
  IngestResponse,
  ReportDocument,
  TraceDocument,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface ReportQuery {
  from?: string;
  to?: string;
  group?: "none" | "day" | "month";
  tz?: string;
}

async function fail(response: Response): Promise<never> {
  let code = "http_error";
  let message = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as ApiErrorBody;
    if (body && body.code) {
      code = body.code;
      message = body.message || message;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(response.status, code, message);
}

export class TrackerApi {
  constructor(
    readonly baseUrl: string,
    readonly appId: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}/v1/apps/${encodeURIComponent(this.appId)}${path}`;
  }

  async getCatalog(): Promise<Catalog> {
    const response = await this.fetchImpl(this.url("/catalog"));
    if (!response.ok) await fail(response);
    return (await response.json()) as Catalog;
  }

  async getReport(query: ReportQuery = {}): Promise<ReportDocument> {
    const params = new URLSearchParams();
    if (query.from) params.set("from", query.from);
    if (query.to) params.set("to", query.to);
    params.set("group", query.group ?? "day");
    if (query.tz) params.set("tz", query.tz);
    const response = await this.fetchImpl(this.url(`/report?${params.toString()}`));
    if (!response.ok) await fail(response);
    return (await response.json()) as ReportDocument;
  }

  async getTrace(attributionId: string): Promise<TraceDocument> {
    const response = await this.fetchImpl(
      this.url(`/attributions/${encodeURIComponent(attributionId)}/trace`),
    );
    if (!response.ok) await fail(response);
    return (await response.json()) as TraceDocument;
  }

  async postEvent(line: string): Promise<IngestResponse> {
    const response = await this.fetchImpl(this.url("/events"), {
      method: "POST",
      headers: { "content-type": "text/plain" },
      body: line,
    });
    if (!response.ok) await fail(response);
    const report = (await response.json()) as IngestResponse;
    if (report.accepted !== 1) {
      const rejection = report.rejected[0];
      throw new ApiError(
        200,
        rejection ? rejection.code : "rejected",
        rejection ? rejection.reason : "event rejected",
      );
    }
    return report;
  }
}
