/** Thin typed client over the service's JSON API.
 *
 * Network failures raise OfflineError (the UI shows a banner and does not
 * retry on its own); a 409 on a decision raises ConflictError carrying the
 * server's winning item state.
 */

import type {
  Decision,
  DecisionResponse,
  QueueFilters,
  QueueItem,
  QueuePage,
  StatsView,
  SynsetView,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

export class ConflictError extends ApiError {
  constructor(message: string, readonly winner: QueueItem | null = null) {
    super(409, message);
    this.name = "ConflictError";
  }
}

export class OfflineError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
    this.name = "OfflineError";
  }
}

export class ApiClient {
  author = "";

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => globalThis.fetch(url, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (cause) {
      throw new OfflineError(cause);
    }
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail =
        typeof body === "object" && body !== null && "detail" in body
          ? String((body as { detail: unknown }).detail)
          : response.statusText;
      if (response.status === 409) {
        throw new ConflictError(detail);
      }
      throw new ApiError(response.status, detail);
    }
    return body;
  }

  async queue(filters: QueueFilters, page: number, pageSize: number): Promise<QueuePage> {
    const params = new URLSearchParams();
    if (filters.status) params.set("status", filters.status);
    if (filters.pos) params.set("pos", filters.pos);
    if (filters.reason) params.set("reason", filters.reason);
    params.set("page", String(page));
    params.set("page_size", String(pageSize));
    return (await this.request(`/api/queue?${params}`)) as QueuePage;
  }

  async decide(itemId: string, decision: Decision, newText?: string): Promise<DecisionResponse> {
    return (await this.request(`/api/queue/${itemId}/decision`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        decision,
        newText: newText ?? null,
        author: this.author || null,
      }),
    })) as DecisionResponse;
  }

  async synset(id: string): Promise<SynsetView> {
    return (await this.request(`/api/synset/${id}`)) as SynsetView;
  }

  async stats(): Promise<StatsView> {
    return (await this.request("/api/stats")) as StatsView;
  }
}
