/** Typed REST client for the assessment service.
 *
 * The fetch function is injectable so tests can run against a fake
 * transport; the browser entry point passes the real one.
 */
import type {
  AnalysisReport,
  CoverageResponse,
  ProductSpec,
  Rule,
  SessionState,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
    readonly body: unknown,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const text = await response.text();
    let parsed: unknown = null;
    try {
      parsed = text ? JSON.parse(text) : null;
    } catch {
      parsed = text;
    }
    if (!response.ok) {
      const detail =
        parsed && typeof parsed === "object" && "detail" in (parsed as object)
          ? String((parsed as { detail: unknown }).detail)
          : response.statusText;
      throw new ApiError(response.status, detail, parsed);
    }
    return parsed as T;
  }

  createSession(products: ProductSpec[], id?: string): Promise<SessionState> {
    const payload: Record<string, unknown> = { products };
    if (id !== undefined) payload.id = id;
    return this.request("POST", "/sessions", payload);
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  postComparison(
    sessionId: string,
    i: number,
    j: number,
    value: number,
  ): Promise<{ recorded: [number, number, number]; coverage: Record<string, number> }> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/comparisons`, {
      i,
      j,
      value,
    });
  }

  getCoverage(sessionId: string): Promise<CoverageResponse> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/coverage`);
  }

  completeStage1(sessionId: string): Promise<{ stage_status: Record<string, string> }> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/stage1/complete`);
  }

  putAppeal(
    sessionId: string,
    scores: Record<number, number>,
  ): Promise<{ stage_status: Record<string, string> }> {
    return this.request("PUT", `/sessions/${encodeURIComponent(sessionId)}/appeal`, scores);
  }

  putRules(
    sessionId: string,
    codes: Record<number, [number, number, number]>,
  ): Promise<{ stage_status: Record<string, string> }> {
    return this.request("PUT", `/sessions/${encodeURIComponent(sessionId)}/rules`, codes);
  }

  analyze(sessionId: string, k = 2, seed = 0): Promise<AnalysisReport> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/analyze`, {
      k,
      seed,
    });
  }

  /** URL of a rendered product profile, optionally with a rule preview. */
  profileUrl(productId: number, options?: { rule?: Rule; delta?: number; session?: string }): string {
    const query = new URLSearchParams();
    if (options?.rule) query.set("rule", options.rule);
    if (options?.delta !== undefined) query.set("delta", String(options.delta));
    if (options?.session) query.set("session", options.session);
    const suffix = query.toString();
    return `${this.baseUrl}/products/${productId}/profile.svg${suffix ? "?" + suffix : ""}`;
  }
}
