// Chart rendering indirection. In the browser the vega-embed UMD bundle
// (loaded by index.html) draws real charts; without it, elements get a
// compact textual stand-in. Either way the exact spec is attached to the
// element, so tests and devtools can trace every pixel back to a service
// response.

import type { VegaLiteSpec } from "./types.js";

export type ChartRenderer = (el: HTMLElement, spec: VegaLiteSpec) => Promise<void>;

type EmbedFn = (el: HTMLElement, spec: object, opts?: object) => Promise<unknown>;

function embedFn(): EmbedFn | null {
  const embed = (globalThis as { vegaEmbed?: unknown }).vegaEmbed;
  return typeof embed === "function" ? (embed as EmbedFn) : null;
}

export function attachSpec(el: HTMLElement, spec: VegaLiteSpec): void {
  el.dataset.spec = JSON.stringify(spec);
}

export const defaultRenderer: ChartRenderer = async (el, spec) => {
  attachSpec(el, spec);
  const embed = embedFn();
  if (embed) {
    await embed(el, spec, { actions: false });
    return;
  }
  const fields = Object.entries(spec.encoding)
    .map(([channel, entry]) => `${channel}: ${entry?.field ?? entry?.aggregate ?? "?"}`)
    .join(", ");
  el.textContent = `[${spec.mark}] ${fields}`;
  el.classList.add("chart-fallback");
};
