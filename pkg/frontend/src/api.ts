/** REST client for the suggestion service; fetch is injectable for tests. */

import type {
  ApiErrorBody,
  EntitySearchHit,
  LabelSearchHit,
  SeedPayload,
  SuggestResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details?: unknown,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let body: ApiErrorBody | null = null;
  try {
    body = (await response.json()) as ApiErrorBody;
  } catch {
    // non-JSON error body; fall through to a generic error
  }
  return new ApiError(
    response.status,
    body?.code ?? "HTTP_ERROR",
    body?.message ?? `request failed with status ${response.status}`,
    body?.details,
  );
}

export class RestClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  suggestRows(seed: SeedPayload, limit = 10): Promise<SuggestResponse> {
    return this.post("/v1/suggest/rows", { seed, limit });
  }

  suggestColumns(seed: SeedPayload, limit = 10): Promise<SuggestResponse> {
    return this.post("/v1/suggest/columns", { seed, limit });
  }

  searchEntities(q: string, limit = 10): Promise<EntitySearchHit[]> {
    const query = new URLSearchParams({ q, limit: String(limit) });
    return this.get(`/v1/entities/search?${query}`);
  }

  searchLabels(q: string, limit = 10): Promise<LabelSearchHit[]> {
    const query = new URLSearchParams({ q, limit: String(limit) });
    return this.get(`/v1/labels/search?${query}`);
  }

  health(): Promise<{ status: string; tables: number; entities: number }> {
    return this.get("/v1/health");
  }
}
