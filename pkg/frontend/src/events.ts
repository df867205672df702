// Builders for schema-v1 event lines. Amount strings from the catalog
// pass through verbatim; the client does no money arithmetic.

import type { CatalogExchange, CatalogItem, CatalogPack } from "./types.js";

export function nowUtcSeconds(clock: () => Date = () => new Date()): string {
  const iso = clock().toISOString(); // 2024-05-12T09:00:00.123Z
  return iso.slice(0, 19) + "Z";
}

export function newEventId(): string {
  if (typeof crypto !== "undefined" && "randomUUID" in crypto) {
    return `ui-${crypto.randomUUID()}`;
  }
  return `ui-${Date.now()}-${Math.floor(Math.random() * 1e9)}`;
}

interface BuildContext {
  appId: string;
  eventId?: string;
  ts?: string;
}

export function packPurchaseLine(pack: CatalogPack, ctx: BuildContext): string {
  return JSON.stringify({
    type: "real_purchase",
    event_id: ctx.eventId ?? newEventId(),
    app_id: ctx.appId,
    ts: ctx.ts ?? nowUtcSeconds(),
    paid: { amount: pack.paid.amount, currency: pack.paid.currency },
    received: { code: pack.receive.code, units: pack.receive.units },
  });
}

export function exchangeLine(exchange: CatalogExchange, ctx: BuildContext): string {
  return JSON.stringify({
    type: "exchange",
    event_id: ctx.eventId ?? newEventId(),
    app_id: ctx.appId,
    ts: ctx.ts ?? nowUtcSeconds(),
    spent: { code: exchange.spend.code, units: exchange.spend.units },
    received: { code: exchange.receive.code, units: exchange.receive.units },
  });
}

export function itemPurchaseLine(item: CatalogItem, ctx: BuildContext): string {
  return JSON.stringify({
    type: "item_purchase",
    event_id: ctx.eventId ?? newEventId(),
    app_id: ctx.appId,
    ts: ctx.ts ?? nowUtcSeconds(),
    item_id: item.id,
    count: item.count,
    paid_with: item.price.map((p) => ({ code: p.code, units: p.units })),
  });
}
