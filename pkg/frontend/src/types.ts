// Wire types for the spend-tracker API. Every money amount is a pair of
// server-rendered strings; the client never parses or computes them.

export interface MoneyFields {
  exact: string;
  display: string;
}

export interface CurrencyRef {
  code: string;
  units: number;
}

export interface CatalogPack {
  id: string;
  name?: string;
  paid: { amount: string; currency: string };
  receive: CurrencyRef;
}

export interface CatalogExchange {
  id: string;
  name?: string;
  spend: CurrencyRef;
  receive: CurrencyRef;
}

export interface CatalogItem {
  id: string;
  name?: string;
  count: number;
  price: CurrencyRef[];
}

export interface Catalog {
  app_id: string;
  packs?: CatalogPack[];
  exchanges?: CatalogExchange[];
  items?: CatalogItem[];
}

export interface AttributionRow {
  id: string;
  item_id: string;
  count: number;
  date: string;
  cost: MoneyFields;
  unit_cost_display: string;
}

export interface ReportBucket {
  bucket: string;
  real_spend: MoneyFields;
  attributions: AttributionRow[];
}

export interface ReportDocument {
  app_id: string;
  report_currency: string;
  strategy: string;
  from: string | null;
  to: string | null;
  group: string;
  tz_offset: string;
  totals: { real_spend: MoneyFields };
  currencies: {
    app_id: string;
    code: string;
    real_spend: MoneyFields;
    virtual_bought: number;
  }[];
  attributions: AttributionRow[];
  wallet: Record<string, number>;
  buckets: ReportBucket[] | null;
}

export interface TraceStep {
  description: string;
  rate: string;
  running_product: string;
  term: string;
}

export interface TraceSegment {
  lot_id: string;
  steps: TraceStep[];
  subtotal: MoneyFields;
  expression: string;
}

export interface TraceDocument {
  attribution_id: string;
  item_id: string;
  segments: TraceSegment[];
  total: MoneyFields;
  arithmetic: string;
}

export interface IngestResponse {
  accepted: number;
  rejected: { line_no: number; code: string; reason: string }[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
}
