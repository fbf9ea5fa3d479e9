/**
 * Thin HTTP client for the model service.
 *
 * The client tracks the session revision from every response envelope and
 * sends it back as If-Match on mutating requests, so a concurrent writer
 * turns into an explicit RevisionConflict instead of a silent overwrite.
 */

import type {
  AnalysisResponse,
  DecisionRequest,
  DecisionResponse,
  ModelResponse,
  ResolveRequest,
  ResolveResponse,
  TraceReportResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
    this.name = "ApiError";
  }
}

export class RevisionConflict extends Error {
  constructor(readonly revision: number) {
    super(`revision mismatch, server is at ${revision}`);
    this.name = "RevisionConflict";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ClientOptions {
  baseUrl?: string;
  fetchFn?: FetchLike;
}

async function readDetail(response: Response): Promise<unknown> {
  try {
    const body: unknown = await response.json();
    if (body && typeof body === "object" && "detail" in body) {
      return (body as { detail: unknown }).detail;
    }
    return body;
  } catch {
    return response.statusText;
  }
}

export class Client {
  readonly baseUrl: string;
  #fetchFn: FetchLike | undefined;
  #revision: number | null = null;

  constructor(options: ClientOptions = {}) {
    this.baseUrl = options.baseUrl ?? "";
    this.#fetchFn = options.fetchFn;
  }

  /** Last revision acknowledged by the server, null before the first call. */
  get revision(): number | null {
    return this.#revision;
  }

  getModel(): Promise<ModelResponse> {
    return this.#request("GET", "/api/model");
  }

  getAnalysis(): Promise<AnalysisResponse> {
    return this.#request("GET", "/api/fp/analysis");
  }

  postDecision(body: DecisionRequest): Promise<DecisionResponse> {
    return this.#request("POST", "/api/fp/decisions", body);
  }

  postResolve(body: ResolveRequest): Promise<ResolveResponse> {
    return this.#request("POST", "/api/sp/resolve", body);
  }

  getTraceReport(): Promise<TraceReportResponse> {
    return this.#request("GET", "/api/trace/report");
  }

  async #request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    const init: RequestInit = { method, headers };
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      init.body = JSON.stringify(body);
    }
    if (method !== "GET" && this.#revision !== null) {
      headers["If-Match"] = `"${this.#revision}"`;
    }
    const fetchFn = this.#fetchFn ?? globalThis.fetch;
    const response = await fetchFn(this.baseUrl + path, init);
    if (response.status === 409) {
      const detail = await readDetail(response);
      const revision =
        detail && typeof detail === "object" && "revision" in detail
          ? Number((detail as { revision: unknown }).revision)
          : -1;
      throw new RevisionConflict(revision);
    }
    if (!response.ok) {
      throw new ApiError(response.status, await readDetail(response));
    }
    const payload = (await response.json()) as T;
    const revision = (payload as { revision?: unknown }).revision;
    if (typeof revision === "number") {
      this.#revision = revision;
    }
    return payload;
  }
}
