// Typed client for the exploration service. Every method returns parsed
// JSON; non-2xx responses raise ApiError with the service's error payload.

import type {
  BookmarkJson,
  ChannelName,
  FilterJson,
  MappingJson,
  MappingOp,
  RecommendationsJson,
  SnapshotJson,
  VarTypeName,
  VegaLiteSpec,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly context: Record<string, unknown>;

  constructor(status: number, code: string, message: string, context: Record<string, unknown>) {
    super(message);
    this.status = status;
    this.code = code;
    this.context = context;
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = "http_error";
  let message = `${response.status} ${response.statusText}`;
  let context: Record<string, unknown> = {};
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
    context = body.context ?? {};
  } catch {
    // keep the HTTP-level description
  }
  throw new ApiError(response.status, code, message, context);
}

export class ApiClient {
  constructor(readonly base: string) {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.url(path), {
      headers: init?.body ? { "content-type": "application/json" } : undefined,
      ...init,
    });
    return parseOrThrow<T>(response);
  }

  async createSession(file: Blob, filename: string): Promise<SnapshotJson> {
    // Multipart body built by hand: identical bytes in every runtime, no
    // reliance on the host's FormData implementation.
    const content = await file.text();
    const boundary = `vizrec${Math.random().toString(36).slice(2)}`;
    const safeName = filename.replace(/"/g, "'");
    const body =
      `--${boundary}\r\n` +
      `Content-Disposition: form-data; name="file"; filename="${safeName}"\r\n` +
      `Content-Type: text/csv\r\n\r\n` +
      `${content}\r\n--${boundary}--\r\n`;
    const response = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": `multipart/form-data; boundary=${boundary}` },
      body,
    });
    return parseOrThrow<SnapshotJson>(response);
  }

  getSession(id: string): Promise<SnapshotJson> {
    return this.json(`/sessions/${id}`);
  }

  patchMapping(
    id: string,
    body: { ops?: MappingOp[]; map?: MappingJson; mark?: string; stacked?: boolean },
  ): Promise<SnapshotJson> {
    return this.json(`/sessions/${id}/mapping`, {
      method: "PATCH",
      body: JSON.stringify(body),
    });
  }

  putType(id: string, variable: string, type: VarTypeName): Promise<SnapshotJson> {
    return this.json(`/sessions/${id}/types/${encodeURIComponent(variable)}`, {
      method: "PUT",
      body: JSON.stringify({ type }),
    });
  }

  putFilters(id: string, filters: FilterJson[]): Promise<SnapshotJson> {
    return this.json(`/sessions/${id}/filters`, {
      method: "PUT",
      body: JSON.stringify({ filters }),
    });
  }

  getRecommendations(id: string): Promise<RecommendationsJson> {
    return this.json(`/sessions/${id}/recommendations`);
  }

  async getSpecText(id: string): Promise<string> {
    const response = await fetch(this.url(`/sessions/${id}/spec`));
    if (!response.ok) {
      await parseOrThrow(response);
    }
    return response.text();
  }

  addBookmark(id: string, spec: VegaLiteSpec, question: string): Promise<BookmarkJson> {
    return this.json(`/sessions/${id}/bookmarks`, {
      method: "POST",
      body: JSON.stringify({ spec, question }),
    });
  }

  async listBookmarks(id: string): Promise<BookmarkJson[]> {
    const body = await this.json<{ bookmarks: BookmarkJson[] }>(`/sessions/${id}/bookmarks`);
    return body.bookmarks;
  }

  removeBookmark(id: string, bookmarkId: string): Promise<{ removed: boolean }> {
    return this.json(`/sessions/${id}/bookmarks/${bookmarkId}`, { method: "DELETE" });
  }

  assignOp(channel: ChannelName, field: MappingOp["field"]): MappingOp {
    return { op: "assign", channel, field };
  }

  clearOp(channel: ChannelName): MappingOp {
    return { op: "clear", channel };
  }
}
