// The four-panel exploration client: variables (A), visual dimensions (B),
// main chart (C) and question cards (D), plus a bookmark sidebar. All data
// shown comes from service responses; the only client-side smarts are the
// gating hint and the encoding->mapping inversion used by promote.

import { ApiClient, ApiError } from "./api.js";
import { specToMapping } from "./promote.js";
import { attachSpec, defaultRenderer, type ChartRenderer } from "./render.js";
import {
  CHANNELS,
  TYPE_COLORS,
  TYPE_CYCLE,
  TYPE_LETTERS,
  spanText,
  type BookmarkJson,
  type ChannelName,
  type FieldRefJson,
  type GroupJson,
  type SnapshotJson,
  type Span,
  type VariableInfo,
} from "./types.js";

const DRAG_MIME = "application/x-vizrec-variable";

function h<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const el = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") {
      el.className = value;
    } else {
      el.setAttribute(key, value);
    }
  }
  el.append(...children);
  return el;
}

export class App {
  snapshot: SnapshotJson | null = null;
  bookmarks: BookmarkJson[] = [];
  pickedVariable: string | null = null;
  busy = false;
  status = "";

  constructor(
    readonly root: HTMLElement,
    readonly api: ApiClient,
    readonly renderer: ChartRenderer = defaultRenderer,
  ) {
    this.render();
  }

  // ----- state transitions -------------------------------------------------

  async uploadFile(file: Blob, filename: string): Promise<void> {
    await this.mutate(async () => {
      this.snapshot = await this.api.createSession(file, filename);
      this.bookmarks = [];
      this.status = "";
    });
  }

  async assignVariable(channel: ChannelName, variable: string): Promise<void> {
    if (!this.channelEnabled(channel)) {
      this.status = `${channel} is unavailable: map a variable to x or y first`;
      this.render();
      return;
    }
    const field: FieldRefJson = { field: variable };
    await this.mutateSession((id) =>
      this.api.patchMapping(id, { ops: [{ op: "assign", channel, field }] }),
    );
  }

  async clearChannel(channel: ChannelName): Promise<void> {
    await this.mutateSession((id) =>
      this.api.patchMapping(id, { ops: [{ op: "clear", channel }] }),
    );
  }

  async cycleType(variable: VariableInfo): Promise<void> {
    const next =
      TYPE_CYCLE[(TYPE_CYCLE.indexOf(variable.effective_type) + 1) % TYPE_CYCLE.length];
    await this.mutateSession((id) => this.api.putType(id, variable.name, next));
  }

  async promote(group: GroupJson, candidateIndex: number): Promise<void> {
    const mapping = specToMapping(group.candidates[candidateIndex]);
    await this.mutateSession((id) => this.api.patchMapping(id, { map: mapping }));
  }

  async bookmark(group: GroupJson, candidateIndex: number): Promise<void> {
    if (!this.snapshot || this.busy) {
      return;
    }
    this.busy = true;
    try {
      await this.api.addBookmark(
        this.snapshot.id,
        group.candidates[candidateIndex],
        spanText(group.question),
      );
      this.bookmarks = await this.api.listBookmarks(this.snapshot.id);
      // Refresh so cards can show their bookmarked state.
      this.snapshot = await this.api.getSession(this.snapshot.id);
      this.status = "";
    } catch (error) {
      this.status = error instanceof ApiError ? error.message : String(error);
    } finally {
      this.busy = false;
      this.render();
    }
  }

  async removeBookmark(bookmarkId: string): Promise<void> {
    if (!this.snapshot || this.busy) {
      return;
    }
    this.busy = true;
    try {
      await this.api.removeBookmark(this.snapshot.id, bookmarkId);
      this.bookmarks = await this.api.listBookmarks(this.snapshot.id);
      this.snapshot = await this.api.getSession(this.snapshot.id);
      this.status = "";
    } catch (error) {
      this.status = error instanceof ApiError ? error.message : String(error);
    } finally {
      this.busy = false;
      this.render();
    }
  }

  private async mutateSession(
    call: (id: string) => Promise<SnapshotJson>,
  ): Promise<void> {
    const id = this.snapshot?.id;
    if (!id) {
      return;
    }
    await this.mutate(async () => {
      this.snapshot = await call(id);
      this.status = "";
    });
  }

  /** Single-flight guard: one mutation at a time keeps snapshots coherent. */
  private async mutate(run: () => Promise<void>): Promise<void> {
    if (this.busy) {
      return;
    }
    this.busy = true;
    this.render();
    try {
      await run();
    } catch (error) {
      this.status = error instanceof ApiError ? error.message : String(error);
    } finally {
      this.busy = false;
      this.render();
    }
  }

  // ----- derived state ------------------------------------------------------

  channelEnabled(channel: ChannelName): boolean {
    if (channel === "x" || channel === "y") {
      return true;
    }
    const mapping = this.snapshot?.mapping ?? {};
    return Boolean(mapping.x || mapping.y);
  }

  // ----- rendering ----------------------------------------------------------

  render(): void {
    this.root.textContent = "";
    this.root.classList.toggle("busy", this.busy);
    if (!this.snapshot) {
      this.root.append(this.renderUpload());
      return;
    }
    const layout = h("div", { class: "layout" });
    layout.append(
      this.renderVariablesPanel(),
      this.renderChannelsPanel(),
      this.renderMainPanel(),
      this.renderQuestionsPanel(),
      this.renderBookmarksPanel(),
    );
    this.root.append(this.renderStatusBar(), layout);
  }

  private renderUpload(): HTMLElement {
    const input = h("input", {
      type: "file",
      accept: ".csv,text/csv",
      "data-testid": "upload-input",
    });
    input.addEventListener("change", () => {
      const file = input.files?.[0];
      if (file) {
        void this.uploadFile(file, file.name);
      }
    });
    const panel = h(
      "div",
      { class: "upload-screen" },
      h("h1", {}, "vizrec"),
      h("p", {}, "Upload a CSV with a header row to start exploring."),
      input,
    );
    if (this.status) {
      panel.append(h("p", { class: "status error" }, this.status));
    }
    return panel;
  }

  private renderStatusBar(): HTMLElement {
    return h(
      "div",
      { class: "status-bar", "data-testid": "status" },
      this.status || (this.busy ? "working..." : "ready"),
    );
  }

  private renderVariablesPanel(): HTMLElement {
    const snapshot = this.snapshot!;
    const list = h("ul", { class: "variables", "data-testid": "panel-variables" });
    for (const variable of snapshot.dataset.variables) {
      const badge = h(
        "button",
        {
          class: `type-badge color-${TYPE_COLORS[variable.effective_type]}`,
          title: `${variable.effective_type}; click to change`,
          "data-testid": `badge-${variable.name}`,
        },
        TYPE_LETTERS[variable.effective_type],
      );
      badge.addEventListener("click", () => void this.cycleType(variable));

      const item = h(
        "li",
        {
          class: "variable" + (this.pickedVariable === variable.name ? " picked" : ""),
          draggable: "true",
          "data-testid": `variable-${variable.name}`,
        },
        badge,
        h("span", { class: "variable-name" }, variable.name),
      );
      item.addEventListener("dragstart", (event) => {
        event.dataTransfer?.setData(DRAG_MIME, variable.name);
      });
      // Keyboard/click fallback: pick a variable, then pick a channel.
      item.addEventListener("click", (event) => {
        if (event.target === badge) {
          return;
        }
        this.pickedVariable =
          this.pickedVariable === variable.name ? null : variable.name;
        this.render();
      });
      list.append(item);
    }
    return h("section", { class: "panel panel-a" }, h("h2", {}, "Variables"), list);
  }

  private renderChannelsPanel(): HTMLElement {
    const snapshot = this.snapshot!;
    const container = h("div", { class: "channels", "data-testid": "panel-channels" });
    for (const channel of CHANNELS) {
      const enabled = this.channelEnabled(channel);
      const assigned = snapshot.mapping[channel];
      const target = h(
        "div",
        {
          class: "channel" + (enabled ? "" : " disabled"),
          "data-channel": channel,
          "data-testid": `channel-${channel}`,
          "aria-disabled": enabled ? "false" : "true",
        },
        h("span", { class: "channel-name" }, channel),
        h("span", { class: "channel-value" }, describeField(assigned)),
      );
      if (assigned) {
        const clearButton = h(
          "button",
          { class: "clear", title: `clear ${channel}`, "data-testid": `clear-${channel}` },
          "x",
        );
        clearButton.addEventListener("click", () => void this.clearChannel(channel));
        target.append(clearButton);
      }
      target.addEventListener("dragover", (event) => {
        if (enabled) {
          event.preventDefault();
        }
      });
      target.addEventListener("drop", (event) => {
        event.preventDefault();
        const name = event.dataTransfer?.getData(DRAG_MIME);
        if (name) {
          void this.assignVariable(channel, name);
        }
      });
      target.addEventListener("click", () => {
        if (this.pickedVariable) {
          const name = this.pickedVariable;
          this.pickedVariable = null;
          void this.assignVariable(channel, name);
        }
      });
      container.append(target);
    }
    return h(
      "section",
      { class: "panel panel-b" },
      h("h2", {}, "Visual dimensions"),
      container,
    );
  }

  private renderMainPanel(): HTMLElement {
    const snapshot = this.snapshot!;
    const chart = h("div", { class: "main-chart", "data-testid": "main-chart" });
    if (snapshot.main_spec) {
      void this.renderer(chart, snapshot.main_spec);
    } else {
      chart.textContent = "Drop a variable on x or y to begin.";
      chart.classList.add("empty");
    }
    return h("section", { class: "panel panel-c" }, h("h2", {}, "Main chart"), chart);
  }

  private renderQuestionsPanel(): HTMLElement {
    const snapshot = this.snapshot!;
    const { groups, notice } = snapshot.recommendations;
    const container = h("div", { class: "questions", "data-testid": "panel-questions" });
    if (notice) {
      container.append(h("p", { class: "notice" }, notice));
    }
    groups.forEach((group, groupIndex) => {
      container.append(this.renderQuestionCard(group, groupIndex));
    });
    return h(
      "section",
      { class: "panel panel-d" },
      h("h2", {}, "Questions"),
      container,
    );
  }

  private renderQuestionCard(group: GroupJson, groupIndex: number): HTMLElement {
    const header = h("p", { class: "question", "data-testid": `question-${groupIndex}` });
    for (const span of group.question) {
      header.append(renderSpan(span));
    }
    const card = h(
      "article",
      { class: "card", "data-added": group.added, "data-testid": `group-${groupIndex}` },
      header,
    );
    const row = h("div", { class: "candidates" });
    group.candidates.forEach((candidate, candidateIndex) => {
      const thumb = h("div", {
        class: "thumb",
        "data-testid": `thumb-${groupIndex}-${candidateIndex}`,
      });
      attachSpec(thumb, candidate);
      void this.renderer(thumb, candidate);

      const bookmarkButton = h(
        "button",
        {
          class: "bookmark" + (group.bookmarks.length ? " saved" : ""),
          title: "bookmark this chart",
          "data-testid": `bookmark-${groupIndex}-${candidateIndex}`,
        },
        "☆",
      );
      bookmarkButton.addEventListener("click", () =>
        void this.bookmark(group, candidateIndex),
      );

      const promoteButton = h(
        "button",
        {
          class: "promote",
          title: "show in the main panel",
          "data-testid": `promote-${groupIndex}-${candidateIndex}`,
        },
        "↗",
      );
      promoteButton.addEventListener("click", () =>
        void this.promote(group, candidateIndex),
      );

      row.append(
        h("div", { class: "candidate" }, thumb, h("div", { class: "actions" }, bookmarkButton, promoteButton)),
      );
    });
    card.append(row);
    return card;
  }

  private renderBookmarksPanel(): HTMLElement {
    const list = h("ul", { class: "bookmarks", "data-testid": "panel-bookmarks" });
    for (const bookmark of this.bookmarks) {
      const thumb = h("div", { class: "thumb small" });
      attachSpec(thumb, bookmark.spec);
      void this.renderer(thumb, bookmark.spec);
      const removeButton = h(
        "button",
        { class: "remove", "data-testid": `remove-${bookmark.id}` },
        "remove",
      );
      removeButton.addEventListener("click", () => void this.removeBookmark(bookmark.id));
      list.append(
        h(
          "li",
          { class: "bookmark-item", "data-bookmark": bookmark.id },
          h("p", { class: "bookmark-question" }, bookmark.question),
          thumb,
          removeButton,
        ),
      );
    }
    return h(
      "section",
      { class: "panel panel-bookmarks" },
      h("h2", {}, "Bookmarks"),
      list,
    );
  }
}

function renderSpan(span: Span): Node {
  if ("text" in span) {
    return document.createTextNode(span.text);
  }
  return h(
    "span",
    { class: `var color-${span.color}`, "data-var": span.var },
    span.var,
  );
}

function describeField(ref: FieldRefJson | undefined): string {
  if (!ref) {
    return "";
  }
  const name = ref.field ?? "count()";
  const modifiers = [ref.aggregate, ref.timeUnit, ref.bin ? "bin" : undefined]
    .filter((m): m is string => Boolean(m))
    .join(", ");
  return modifiers ? `${name} (${modifiers})` : name;
}
