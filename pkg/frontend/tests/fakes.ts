// A scripted in-memory server double for store tests. It mimics the wire
// contract (report/trace/catalog documents, per-line ingest responses)
// without reimplementing any accounting: costs are canned strings.

import type {
  AttributionRow,
  Catalog,
  IngestResponse,
  ReportBucket,
  ReportDocument,
  TraceDocument,
} from "../src/types.js";

export const CATALOG: Catalog = {
  app_id: "demo",
  packs: [
    {
      id: "gems_2500",
      name: "Bucket of Gems",
      paid: { amount: "19.99", currency: "USD" },
      receive: { code: "gems", units: 2500 },
    },
  ],
  exchanges: [
    {
      id: "gold_1000",
      name: "Pack of 1,000 Gold",
      spend: { code: "gems", units: 60 },
      receive: { code: "gold", units: 1000 },
    },
  ],
  items: [
    {
      id: "magic_chest",
      name: "Magic Chest",
      count: 1,
      price: [{ code: "gems", units: 250 }],
    },
    {
      id: "wizard_card",
      name: "Wizard Card (x8)",
      count: 8,
      price: [{ code: "gold", units: 800 }],
    },
  ],
};

export function emptyReport(): ReportDocument {
  return {
    app_id: "demo",
    report_currency: "USD",
    strategy: "fifo",
    from: null,
    to: null,
    group: "day",
    tz_offset: "+00:00",
    totals: { real_spend: { exact: "0", display: "0.00" } },
    currencies: [],
    attributions: [],
    wallet: {},
    buckets: [],
  };
}

export class FakeApi {
  readonly appId = "demo";
  catalog: Catalog = CATALOG;
  report: ReportDocument = emptyReport();
  traces = new Map<string, TraceDocument>();
  postedLines: string[] = [];
  reportQueries: unknown[] = [];
  failNextPost: Error | null = null;
  failNextReport: Error | null = null;

  async getCatalog(): Promise<Catalog> {
    return structuredClone(this.catalog);
  }

  async getReport(query: unknown = {}): Promise<ReportDocument> {
    if (this.failNextReport) {
      const error = this.failNextReport;
      this.failNextReport = null;
      throw error;
    }
    this.reportQueries.push(query);
    return structuredClone(this.report);
  }

  async getTrace(attributionId: string): Promise<TraceDocument> {
    const trace = this.traces.get(attributionId);
    if (!trace) {
      const { ApiError } = await import("../src/api.js");
      throw new ApiError(404, "unknown_attribution", `no attribution ${attributionId}`);
    }
    return structuredClone(trace);
  }

  async postEvent(line: string): Promise<IngestResponse> {
    if (this.failNextPost) {
      const error = this.failNextPost;
      this.failNextPost = null;
      throw error;
    }
    this.postedLines.push(line);
    return { accepted: 1, rejected: [] };
  }
}

export function bucketWith(rows: AttributionRow[], spent: string,
                           bucket = "2024-05-12"): ReportBucket {
  return {
    bucket,
    real_spend: { exact: spent, display: spent },
    attributions: rows,
  };
}

export function row(id: string, item: string, display: string,
                    date = "2024-05-12"): AttributionRow {
  return {
    id,
    item_id: item,
    count: 1,
    date,
    cost: { exact: `${display}-exact`, display },
    unit_cost_display: display,
  };
}
