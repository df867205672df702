// DOM rendering. All money strings come from the server verbatim.

import type { ShopStore } from "./store.js";
import type { AttributionRow, ReportBucket } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function button(label: string, className: string, disabled: boolean,
                onClick: () => void): HTMLButtonElement {
  const node = el("button", className, label);
  node.disabled = disabled;
  node.addEventListener("click", onClick);
  return node;
}

export function mount(root: HTMLElement, store: ShopStore): void {
  const render = () => {
    root.textContent = "";
    root.append(
      renderBanner(store),
      renderRedirect(store),
      renderWallet(store),
      renderShop(store),
      renderTracker(store),
      renderTrace(store),
    );
  };
  store.subscribe(render);
  render();
}

function renderBanner(store: ShopStore): HTMLElement {
  const wrap = el("div");
  if (store.state.banner) {
    const banner = el("div", "banner error");
    banner.append(el("span", "", `⚠ ${store.state.banner}`));
    banner.append(button("Retry", "retry", false, () => void store.init()));
    wrap.append(banner);
  }
  return wrap;
}

function renderRedirect(store: ShopStore): HTMLElement {
  const wrap = el("div");
  const redirect = store.state.redirect;
  if (redirect) {
    const panel = el("div", "banner redirect");
    const missing = redirect.missing
      .map((m) => `${m.need - m.have} more ${m.code}`)
      .join(", ");
    panel.append(
      el("span", "",
         missing
           ? `Not enough for ${redirect.name} — you need ${missing}. ` +
             `Grab a pack below.`
           : `Not enough for ${redirect.name} — the shop is below.`),
    );
    panel.append(button("OK", "retry", false, () => store.dismissRedirect()));
    wrap.append(panel);
  }
  return wrap;
}

function renderWallet(store: ShopStore): HTMLElement {
  const panel = el("section", "panel wallet");
  panel.append(el("h2", "", "Wallet"));
  const codes = Object.keys(store.state.wallet).sort();
  if (codes.length === 0) {
    panel.append(el("p", "muted", "empty — buy a pack to get started"));
  } else {
    const list = el("div", "wallet-row");
    for (const code of codes) {
      list.append(el("span", "chip", `${store.state.wallet[code]} ${code}`));
    }
    panel.append(list);
  }
  const total = store.state.report?.totals.real_spend.display;
  if (total !== undefined) {
    panel.append(el("p", "total", `Real money spent: $${total}`));
  }
  return panel;
}

function renderShop(store: ShopStore): HTMLElement {
  const panel = el("section", "panel shop");
  panel.append(el("h2", "", "Shop"));
  const catalog = store.state.catalog;
  if (!catalog) {
    panel.append(el("p", "muted", "catalog unavailable"));
    return panel;
  }
  const busy = store.state.busy;

  const packs = el("div", "shop-group");
  packs.append(el("h3", "", "Currency packs (real money)"));
  for (const pack of catalog.packs ?? []) {
    const row = el("div", "offer");
    row.append(el("span", "", `${pack.name ?? pack.id} — ${pack.receive.units} ${pack.receive.code}`));
    row.append(button(`$${pack.paid.amount}`, "buy", busy,
                      () => void store.buyPack(pack.id)));
    packs.append(row);
  }
  panel.append(packs);

  const exchanges = el("div", "shop-group");
  exchanges.append(el("h3", "", "Currency exchange"));
  for (const exchange of catalog.exchanges ?? []) {
    const row = el("div", "offer");
    row.append(el("span", "",
      `${exchange.name ?? exchange.id} — ${exchange.receive.units} ${exchange.receive.code}`));
    row.append(button(`${exchange.spend.units} ${exchange.spend.code}`, "buy", busy,
                      () => void store.buyExchange(exchange.id)));
    exchanges.append(row);
  }
  panel.append(exchanges);

  const items = el("div", "shop-group");
  items.append(el("h3", "", "Items"));
  for (const item of catalog.items ?? []) {
    const row = el("div", "offer");
    const price = item.price.map((p) => `${p.units} ${p.code}`).join(" + ");
    row.append(el("span", "", `${item.name ?? item.id}`));
    row.append(button(price, "buy", busy, () => void store.buyItem(item.id)));
    items.append(row);
  }
  panel.append(items);
  return panel;
}

function renderTracker(store: ShopStore): HTMLElement {
  const panel = el("section", "panel tracker");
  panel.append(el("h2", "", "Where your money went"));
  panel.append(renderFilter(store));
  if (store.state.filterError) {
    panel.append(el("p", "inline-error", store.state.filterError));
  }
  const buckets = store.state.buckets;
  if (buckets.length === 0) {
    panel.append(el("p", "muted", "no purchases in this range yet"));
    return panel;
  }
  for (const bucket of buckets) {
    panel.append(renderBucket(store, bucket));
  }
  return panel;
}

function renderFilter(store: ShopStore): HTMLElement {
  const form = el("div", "filter");
  const from = el("input") as HTMLInputElement;
  from.placeholder = "from YYYY-MM-DD";
  from.value = store.state.filter.from ?? "";
  const to = el("input") as HTMLInputElement;
  to.placeholder = "to YYYY-MM-DD";
  to.value = store.state.filter.to ?? "";
  const group = el("select") as HTMLSelectElement;
  for (const value of ["day", "month"]) {
    const option = el("option", "", value) as HTMLOptionElement;
    option.value = value;
    if (value === store.state.filter.group) option.selected = true;
    group.append(option);
  }
  form.append(
    from, to, group,
    button("Apply", "apply", false, () =>
      void store.setDateFilter(from.value || null, to.value || null,
                               group.value as "day" | "month")),
  );
  return form;
}

function renderBucket(store: ShopStore, bucket: ReportBucket): HTMLElement {
  const section = el("div", "bucket");
  section.append(el("h3", "",
    `${bucket.bucket} — spent $${bucket.real_spend.display}`));
  for (const row of bucket.attributions) {
    section.append(renderRow(store, row));
  }
  if (bucket.attributions.length === 0) {
    section.append(el("p", "muted", "currency bought, no items yet"));
  }
  return section;
}

function renderRow(store: ShopStore, row: AttributionRow): HTMLElement {
  const line = el("div", "item-row");
  line.append(el("span", "cost", `$${row.cost.display}`));
  line.append(el("span", "", `${row.count}× ${row.item_id}`));
  line.append(el("span", "muted", row.date));
  line.append(button("how?", "trace-link", false,
                     () => void store.viewTrace(row.id)));
  return line;
}

function renderTrace(store: ShopStore): HTMLElement {
  const wrap = el("div");
  const trace = store.state.selectedTrace;
  if (!trace) return wrap;
  const panel = el("section", "panel trace");
  panel.append(el("h2", "", `How ${trace.item_id} cost $${trace.total.display}`));
  let n = 1;
  for (const segment of trace.segments) {
    for (const step of segment.steps) {
      panel.append(el("p", "step", `${n}. ${step.description}`));
      n += 1;
    }
  }
  panel.append(el("p", "arithmetic", trace.arithmetic));
  panel.append(el("p", "total", `= $${trace.total.display} (exact ${trace.total.exact})`));
  panel.append(button("Close", "retry", false, () => store.closeTrace()));
  wrap.append(panel);
  return wrap;
}
