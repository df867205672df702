// Bootstrap: pick the API base URL and app id, mount the shop.
//
// Configuration, in priority order: ?api= and ?app= query parameters,
// then window globals, then the demo defaults.

import { TrackerApi } from "./api.js";
import { mount } from "./render.js";
import { ShopStore } from "./store.js";

declare global {
  interface Window {
    SPENDTRACE_API?: string;
    SPENDTRACE_APP?: string;
  }
}

const params = new URLSearchParams(window.location.search);
const baseUrl =
  params.get("api") ?? window.SPENDTRACE_API ?? "http://127.0.0.1:8077";
const appId = params.get("app") ?? window.SPENDTRACE_APP ?? "demo";

const store = new ShopStore(new TrackerApi(baseUrl.replace(/\/$/, ""), appId));
const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");
mount(root, store);
void store.init();
