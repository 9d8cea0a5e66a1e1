// End-to-end: drive the four-panel client against the live service and
// check that everything on screen is verbatim service output.

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { spanText, type GroupJson, type VegaLiteSpec } from "../src/types.js";
import { API_BASE } from "./global-setup.js";

const CSV = [
  "date,city,temp",
  "2012-01-05,Lisbon,14.5",
  "2012-02-11,Porto,11.0",
  "2012-06-20,Lisbon,27.3",
  "2012-07-08,Porto,24.9",
  "2013-01-19,Lisbon,13.1",
  "2013-03-02,Porto,12.8",
  "2013-08-15,Lisbon,30.2",
  "2013-09-09,Porto,23.4",
  "2014-04-27,Lisbon,19.6",
  "2014-05-14,Porto,18.2",
  "2014-11-30,Lisbon,15.0",
  "2014-12-25,Porto,9.7",
  "",
].join("\n");

async function waitFor(check: () => boolean, timeoutMs = 10_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (check()) {
      return;
    }
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
  throw new Error("condition not reached in time");
}

function parseSpec(el: Element | null): VegaLiteSpec {
  expect(el, "expected an element carrying a chart spec").not.toBeNull();
  const raw = (el as HTMLElement).dataset.spec;
  expect(raw).toBeTruthy();
  return JSON.parse(raw!) as VegaLiteSpec;
}

function dropVariable(target: Element, name: string): void {
  const event = new Event("drop", { bubbles: true, cancelable: true });
  Object.defineProperty(event, "dataTransfer", {
    value: { getData: () => name },
  });
  target.dispatchEvent(event);
}

describe("four-panel exploration client", () => {
  let root: HTMLElement;
  let app: App;
  const api = new ApiClient(API_BASE);

  beforeEach(() => {
    root = document.createElement("div");
    document.body.append(root);
    app = new App(root, api);
  });

  afterEach(() => {
    root.remove();
  });

  async function uploadThroughInput(): Promise<void> {
    const input = root.querySelector<HTMLInputElement>(
      "[data-testid=upload-input]",
    )!;
    const file = new File([CSV], "mini.csv", { type: "text/csv" });
    Object.defineProperty(input, "files", { value: [file] });
    input.dispatchEvent(new Event("change", { bubbles: true }));
    await waitFor(() => app.snapshot !== null && !app.busy);
  }

  it("runs upload, drag to x, promote and bookmark against live responses", async () => {
    await uploadThroughInput();

    // Fresh session: only the axes accept drops; the rest render gated.
    for (const channel of ["x", "y"]) {
      expect(
        root.querySelector(`[data-testid=channel-${channel}]`)!.getAttribute("aria-disabled"),
      ).toBe("false");
    }
    for (const channel of ["color", "shape", "size", "row", "column"]) {
      expect(
        root.querySelector(`[data-testid=channel-${channel}]`)!.getAttribute("aria-disabled"),
      ).toBe("true");
    }

    // Panel A shows every variable with its type badge.
    const sessionId = app.snapshot!.id;
    expect(root.querySelector("[data-testid=badge-date]")!.textContent).toBe("T");
    expect(root.querySelector("[data-testid=badge-city]")!.textContent).toBe("N");
    expect(root.querySelector("[data-testid=badge-temp]")!.textContent).toBe("Q");

    // Drag the nominal variable onto X.
    dropVariable(root.querySelector("[data-testid=channel-x]")!, "city");
    await waitFor(() => !app.busy && Boolean(app.snapshot?.mapping.x));

    // All seven channels open up now.
    for (const channel of ["color", "shape", "size", "row", "column"]) {
      expect(
        root.querySelector(`[data-testid=channel-${channel}]`)!.getAttribute("aria-disabled"),
      ).toBe("false");
    }

    // The rendered main chart is exactly what GET /spec returns.
    const specText = await api.getSpecText(sessionId);
    const mainSpec = parseSpec(root.querySelector("[data-testid=main-chart]"));
    expect(mainSpec).toEqual(JSON.parse(specText));
    expect(mainSpec.mark).toBe("bar");

    // Every question string and candidate spec matches the service verbatim.
    const recs = await api.getRecommendations(sessionId);
    expect(recs.groups.length).toBeGreaterThan(0);
    recs.groups.forEach((group: GroupJson, gi: number) => {
      const header = root.querySelector(`[data-testid=question-${gi}]`)!;
      expect(header.textContent).toBe(spanText(group.question));
      group.candidates.forEach((candidate, ci) => {
        const thumb = root.querySelector(`[data-testid=thumb-${gi}-${ci}]`);
        expect(parseSpec(thumb)).toEqual(candidate);
      });
      // Variable names inside the question carry their type colors.
      for (const span of group.question) {
        if ("var" in span) {
          const el = header.querySelector(`[data-var=${span.var}]`)!;
          expect(el.className).toContain(`color-${span.color}`);
        }
      }
    });

    // Promote the second candidate of the first group into the main panel.
    const target = recs.groups[0].candidates[1] ?? recs.groups[0].candidates[0];
    const ci = recs.groups[0].candidates[1] ? 1 : 0;
    (root.querySelector(`[data-testid=promote-0-${ci}]`) as HTMLButtonElement).click();
    await waitFor(() => !app.busy);
    expect(parseSpec(root.querySelector("[data-testid=main-chart]"))).toEqual(target);
    // The service derived the same spec from the round-tripped mapping.
    expect(JSON.parse(await api.getSpecText(sessionId))).toEqual(target);

    // Bookmark a candidate; the sidebar and the service agree.
    const freshRecs = await api.getRecommendations(sessionId);
    (root.querySelector("[data-testid=bookmark-0-0]") as HTMLButtonElement).click();
    await waitFor(() => !app.busy && app.bookmarks.length === 1);
    const stored = await api.listBookmarks(sessionId);
    expect(stored).toHaveLength(1);
    expect(stored[0].spec).toEqual(freshRecs.groups[0].candidates[0]);
    expect(stored[0].question).toBe(spanText(freshRecs.groups[0].question));
    const item = root.querySelector(`[data-bookmark=${stored[0].id}]`)!;
    expect(item.querySelector(".bookmark-question")!.textContent).toBe(stored[0].question);
    expect(parseSpec(item.querySelector(".thumb"))).toEqual(stored[0].spec);

    // Removing it empties the sidebar again.
    (root.querySelector(`[data-testid=remove-${stored[0].id}]`) as HTMLButtonElement).click();
    await waitFor(() => !app.busy && app.bookmarks.length === 0);
    expect(await api.listBookmarks(sessionId)).toHaveLength(0);
  });

  it("rejects drops on gated channels client-side with a hint", async () => {
    await uploadThroughInput();
    const before = JSON.stringify(app.snapshot!.mapping);

    dropVariable(root.querySelector("[data-testid=channel-color]")!, "city");
    await waitFor(() => app.status.length > 0);
    expect(app.status).toContain("unavailable");
    expect(JSON.stringify(app.snapshot!.mapping)).toBe(before);
  });

  it("cycles a variable type from the badge and refreshes all panels", async () => {
    await uploadThroughInput();
    (root.querySelector("[data-testid=badge-temp]") as HTMLButtonElement).click();
    await waitFor(
      () => !app.busy && app.snapshot!.dataset.variables[2].effective_type === "nominal",
    );
    expect(root.querySelector("[data-testid=badge-temp]")!.textContent).toBe("N");
    // The questions panel reflects the new type world.
    const recs = await api.getRecommendations(app.snapshot!.id);
    expect(root.querySelectorAll(".card").length).toBe(recs.groups.length);
  });

  it("keyboard fallback: pick a variable, then pick a channel", async () => {
    await uploadThroughInput();
    (root.querySelector("[data-testid=variable-temp] .variable-name") as HTMLElement).click();
    await waitFor(() => app.pickedVariable === "temp");
    (root.querySelector("[data-testid=channel-y]") as HTMLElement).click();
    await waitFor(() => !app.busy && Boolean(app.snapshot?.mapping.y));
    expect(app.snapshot!.mapping.y).toEqual({ field: "temp" });
  });
});
