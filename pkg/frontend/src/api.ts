/** Thin typed client for the recommendation service's HTTP API.
 *
 * The UI never computes recommendations, scores, or link validity locally;
 * every such value comes through this client.
 */

import type {
  CanvasElement,
  CanvasState,
  DatasetInfo,
  Effect,
  Geometry,
  Link,
  LinkMode,
  Recommendations,
  SessionInfo,
  UserInput,
  ViewSpec,
  WidgetSpec,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(res: Response): Promise<never> {
  let code = "unknown_error";
  let message = res.statusText;
  try {
    const body = (await res.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    /* non-JSON error body; keep defaults */
  }
  throw new ApiError(res.status, code, message);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    raw?: false,
  ): Promise<T>;
  private async request(
    method: string,
    path: string,
    body: unknown,
    raw: true,
  ): Promise<string>;
  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    raw = false,
  ): Promise<T | string> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      if (typeof body === "string" || body instanceof Uint8Array) {
        init.body = body as BodyInit;
        init.headers = { "content-type": "text/csv" };
      } else {
        init.body = JSON.stringify(body);
        init.headers = { "content-type": "application/json" };
      }
    }
    const res = await this.fetchFn(this.baseUrl + path, init);
    if (!res.ok) return parseError(res);
    if (res.status === 204) return undefined as T;
    return raw ? res.text() : ((await res.json()) as T);
  }

  uploadDataset(csv: string | Uint8Array): Promise<DatasetInfo> {
    return this.request<DatasetInfo>("POST", "/datasets", csv);
  }

  getDataset(datasetId: string): Promise<DatasetInfo> {
    return this.request<DatasetInfo>("GET", `/datasets/${datasetId}`);
  }

  createSession(datasetId: string): Promise<SessionInfo> {
    return this.request<SessionInfo>("POST", "/sessions", { datasetId });
  }

  getRecommendations(sessionId: string, refresh = false): Promise<Recommendations> {
    const qs = refresh ? "?refresh=true" : "";
    return this.request<Recommendations>(
      "GET",
      `/sessions/${sessionId}/recommendations${qs}`,
    );
  }

  patchInput(
    sessionId: string,
    patch: { explicitAttrs?: string[]; intents?: string[] },
  ): Promise<UserInput> {
    return this.request<UserInput>("PATCH", `/sessions/${sessionId}/input`, patch);
  }

  addElement(
    sessionId: string,
    spec: ViewSpec | WidgetSpec,
    geometry?: Geometry,
  ): Promise<CanvasElement> {
    return this.request<CanvasElement>(
      "POST",
      `/sessions/${sessionId}/canvas/elements`,
      { spec, geometry },
    );
  }

  getCanvas(sessionId: string): Promise<CanvasState> {
    return this.request<CanvasState>("GET", `/sessions/${sessionId}/canvas`);
  }

  deleteElement(sessionId: string, elementId: string): Promise<void> {
    return this.request<void>(
      "DELETE",
      `/sessions/${sessionId}/canvas/elements/${elementId}`,
    );
  }

  moveResizeElement(
    sessionId: string,
    elementId: string,
    geometry: Geometry,
  ): Promise<CanvasElement> {
    return this.request<CanvasElement>(
      "PATCH",
      `/sessions/${sessionId}/canvas/elements/${elementId}`,
      { geometry },
    );
  }

  async getLinks(sessionId: string): Promise<Link[]> {
    const doc = await this.request<{ links: Link[] }>(
      "GET",
      `/sessions/${sessionId}/links`,
    );
    return doc.links;
  }

  setLinkMode(
    sessionId: string,
    sourceId: string,
    targetId: string,
    mode: LinkMode,
  ): Promise<Link> {
    return this.request<Link>(
      "PUT",
      `/sessions/${sessionId}/links/${sourceId}/${targetId}`,
      { mode },
    );
  }

  async postEvent(
    sessionId: string,
    sourceId: string,
    selected: [string, unknown][],
  ): Promise<Effect[]> {
    const doc = await this.request<{ effects: Effect[] }>(
      "POST",
      `/sessions/${sessionId}/events`,
      { sourceId, selected },
    );
    return doc.effects;
  }

  exportDashboard(sessionId: string, format: "json" | "html"): Promise<string> {
    return this.request(
      "GET",
      `/sessions/${sessionId}/export?format=${format}`,
      undefined,
      true,
    );
  }
}
