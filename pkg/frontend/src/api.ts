// Typed API client with latest-wins request cancellation: when a filter
// changes, the in-flight request on the same channel is aborted so stale
// responses can never overwrite fresh ones.

import type {
  CorrelationPayload,
  DistributionPayload,
  FeatureRow,
  GraphPayload,
  NetworkSummary,
  Paged,
  SchemaPayload,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`API ${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: { signal?: AbortSignal }) => Promise<Response>;

export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  buildUrl(path: string, params?: Record<string, string>): string {
    const query = params ? new URLSearchParams(params).toString() : '';
    return `${this.base}${path}${query ? `?${query}` : ''}`;
  }

  /** GET with cancellation of the previous request on the same channel. */
  async get<T>(path: string, params?: Record<string, string>, channel?: string): Promise<T> {
    const key = channel ?? path;
    this.inflight.get(key)?.abort();
    const controller = new AbortController();
    this.inflight.set(key, controller);
    try {
      const response = await this.fetchFn(this.buildUrl(path, params), { signal: controller.signal });
      if (!response.ok) {
        let detail = response.statusText;
        try {
          const body = (await response.json()) as { detail?: string };
          if (body.detail) detail = body.detail;
        } catch {
          // non-JSON error body; keep the status text
        }
        throw new ApiError(response.status, detail);
      }
      return (await response.json()) as T;
    } finally {
      if (this.inflight.get(key) === controller) this.inflight.delete(key);
    }
  }

  schema(): Promise<SchemaPayload> {
    return this.get('/schema');
  }

  networks(params: Record<string, string> = {}): Promise<Paged<NetworkSummary>> {
    return this.get('/networks', { limit: '10000', ...params });
  }

  graph(hsa: string, year: number): Promise<GraphPayload> {
    return this.get(`/networks/${encodeURIComponent(hsa)}/${year}/graph`, undefined, 'graph');
  }

  features(params: Record<string, string> = {}): Promise<Paged<FeatureRow>> {
    return this.get('/features', { limit: '10000', ...params });
  }

  distributions(metric: string, group: string, params: Record<string, string> = {}): Promise<DistributionPayload> {
    return this.get('/distributions', { metric, group, ...params });
  }

  correlate(x: string, y: string, params: Record<string, string> = {}): Promise<CorrelationPayload> {
    return this.get('/correlate', { x, y, ...params });
  }
}
