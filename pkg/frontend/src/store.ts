// Server-authoritative view state. Every figure on screen comes from the
// last acknowledged server response; a failed mutation changes nothing
// except the banner. At most one mutation is in flight at a time, so the
// event order on the server equals the click order.

import { ApiError, TrackerApi } from "./api.js";
import { exchangeLine, itemPurchaseLine, packPurchaseLine } from "./events.js";
import type {
  AttributionRow,
  Catalog,
  CatalogExchange,
  CatalogItem,
  ReportBucket,
  ReportDocument,
  TraceDocument,
} from "./types.js";

export interface Shortfall {
  code: string;
  have: number;
  need: number;
}

export interface ShopRedirect {
  kind: "exchange" | "item";
  id: string;
  name: string;
  missing: Shortfall[];
}

export interface DateFilter {
  from: string | null;
  to: string | null;
  group: "day" | "month";
}

export interface ShopViewState {
  catalog: Catalog | null;
  report: ReportDocument | null;
  wallet: Record<string, number>;
  buckets: ReportBucket[];
  trackerRows: AttributionRow[];
  selectedTrace: TraceDocument | null;
  banner: string | null;
  redirect: ShopRedirect | null;
  busy: boolean;
  filter: DateFilter;
  filterError: string | null;
}

const ISO_DATE = /^\d{4}-\d{2}-\d{2}$/;

export class ShopStore {
  readonly state: ShopViewState = {
    catalog: null,
    report: null,
    wallet: {},
    buckets: [],
    trackerRows: [],
    selectedTrace: null,
    banner: null,
    redirect: null,
    busy: false,
    filter: { from: null, to: null, group: "day" },
    filterError: null,
  };

  private listeners = new Set<() => void>();

  constructor(private readonly api: TrackerApi) {}

  subscribe(listener: () => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  // -- loading ---------------------------------------------------------

  async init(): Promise<void> {
    try {
      this.state.catalog = await this.api.getCatalog();
      await this.refresh();
      this.state.banner = null;
    } catch (error) {
      this.state.banner = describe(error);
    }
    this.notify();
  }

  async refresh(): Promise<void> {
    const { filter } = this.state;
    const report = await this.api.getReport({
      from: filter.from ?? undefined,
      to: filter.to ?? undefined,
      group: filter.group,
    });
    this.adopt(report);
  }

  private adopt(report: ReportDocument): void {
    this.state.report = report;
    this.state.wallet = report.wallet;
    this.state.buckets = report.buckets ?? [];
    this.state.trackerRows = this.state.buckets.flatMap((b) => b.attributions);
  }

  // -- balance inspection (quantities, not money) ------------------------

  shortfalls(price: { code: string; units: number }[]): Shortfall[] {
    const needed = new Map<string, number>();
    for (const entry of price) {
      needed.set(entry.code, (needed.get(entry.code) ?? 0) + entry.units);
    }
    const missing: Shortfall[] = [];
    for (const [code, need] of needed) {
      const have = this.state.wallet[code] ?? 0;
      if (have < need) missing.push({ code, have, need });
    }
    return missing;
  }

  // -- mutations ----------------------------------------------------------

  async buyPack(packId: string): Promise<void> {
    const pack = this.state.catalog?.packs?.find((p) => p.id === packId);
    if (!pack) {
      this.state.banner = `unknown pack ${packId}`;
      this.notify();
      return;
    }
    await this.mutate(() =>
      this.api.postEvent(packPurchaseLine(pack, { appId: this.api.appId })),
    );
  }

  async buyExchange(exchangeId: string): Promise<void> {
    const exchange = this.state.catalog?.exchanges?.find((e) => e.id === exchangeId);
    if (!exchange) {
      this.state.banner = `unknown exchange ${exchangeId}`;
      this.notify();
      return;
    }
    const missing = this.shortfalls([exchange.spend]);
    if (missing.length > 0) {
      this.redirectToShop("exchange", exchange.id, exchange.name ?? exchange.id, missing);
      return;
    }
    await this.mutate(
      () => this.api.postEvent(exchangeLine(exchange, { appId: this.api.appId })),
      (error) => this.maybeRedirect(error, "exchange", exchange.id, exchange.name),
    );
  }

  async buyItem(itemId: string): Promise<void> {
    const item = this.state.catalog?.items?.find((i) => i.id === itemId);
    if (!item) {
      this.state.banner = `unknown item ${itemId}`;
      this.notify();
      return;
    }
    const missing = this.shortfalls(item.price);
    if (missing.length > 0) {
      // The figure-1 moment: not enough currency, route to the shop.
      this.redirectToShop("item", item.id, item.name ?? item.id, missing);
      return;
    }
    await this.mutate(
      () => this.api.postEvent(itemPurchaseLine(item, { appId: this.api.appId })),
      (error) => this.maybeRedirect(error, "item", item.id, item.name),
    );
  }

  private redirectToShop(
    kind: "exchange" | "item",
    id: string,
    name: string,
    missing: Shortfall[],
  ): void {
    this.state.redirect = { kind, id, name, missing };
    this.state.banner = null;
    this.notify();
  }

  private maybeRedirect(
    error: unknown,
    kind: "exchange" | "item",
    id: string,
    name: string | undefined,
  ): boolean {
    // The server stays authoritative: a race can slip past the local
    // balance check, and its insufficient_balance is a redirect, not an
    // error banner.
    if (error instanceof ApiError && error.code === "insufficient_balance") {
      this.redirectToShop(kind, id, name ?? id, []);
      return true;
    }
    return false;
  }

  dismissRedirect(): void {
    this.state.redirect = null;
    this.notify();
  }

  private async mutate(
    post: () => Promise<unknown>,
    onRejected?: (error: unknown) => boolean,
  ): Promise<void> {
    if (this.state.busy) return; // buttons are disabled; belt and braces
    this.state.busy = true;
    this.state.banner = null;
    this.state.redirect = null;
    this.notify();
    try {
      await post();
      await this.refresh();
    } catch (error) {
      if (!(onRejected && onRejected(error))) {
        this.state.banner = describe(error);
      }
    } finally {
      this.state.busy = false;
      this.notify();
    }
  }

  // -- queries ------------------------------------------------------------

  async viewTrace(attributionId: string): Promise<void> {
    try {
      this.state.selectedTrace = await this.api.getTrace(attributionId);
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        // Stale row: the server no longer knows it; re-sync and clear.
        this.state.selectedTrace = null;
        try {
          await this.refresh();
        } catch {
          /* keep the old panel if even the refresh fails */
        }
      } else {
        this.state.banner = describe(error);
      }
    }
    this.notify();
  }

  closeTrace(): void {
    this.state.selectedTrace = null;
    this.notify();
  }

  async setDateFilter(from: string | null, to: string | null,
                      group: "day" | "month"): Promise<void> {
    for (const bound of [from, to]) {
      if (bound !== null && !ISO_DATE.test(bound)) {
        this.state.filterError = `dates must be YYYY-MM-DD, got "${bound}"`;
        this.notify();
        return;
      }
    }
    if (from && to && from > to) {
      this.state.filterError = `"from" ${from} is after "to" ${to}`;
      this.notify();
      return;
    }
    this.state.filterError = null;
    this.state.filter = { from, to, group };
    try {
      await this.refresh();
    } catch (error) {
      this.state.banner = describe(error);
    }
    this.notify();
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  if (error instanceof Error) return error.message;
  return String(error);
}
