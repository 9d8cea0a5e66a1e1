// Browser entry point. The API base defaults to the page origin and can be
// pointed elsewhere with ?api=http://host:port when the static files are
// served separately from the engine.

import { ApiClient } from "./api.js";
import { App } from "./app.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? window.location.origin;

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
new App(root, new ApiClient(base));
