import { GuidelineInfo, ReportView, SessionState } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
  }

  /** Inline message for 422 answers; the service puts valid labels in detail. */
  get inlineMessage(): string {
    const detail = this.detail as { message?: string } | string | undefined;
    if (detail && typeof detail === "object" && detail.message) {
      return detail.message;
    }
    return this.message;
  }
}

export interface WalkthroughApi {
  listGuidelines(): Promise<GuidelineInfo[]>;
  createSession(tree: string): Promise<SessionState>;
  getSession(id: string): Promise<SessionState>;
  answer(id: string, label: string): Promise<SessionState>;
  undo(id: string): Promise<SessionState>;
  report(ids: string[]): Promise<ReportView>;
}

export class ApiClient implements WalkthroughApi {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl.replace(/\/$/, "") + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, body?.detail ?? response.statusText);
    }
    return body as T;
  }

  async listGuidelines(): Promise<GuidelineInfo[]> {
    const payload = await this.request<{ guidelines: GuidelineInfo[] }>("/guidelines");
    return payload.guidelines;
  }

  createSession(tree: string): Promise<SessionState> {
    return this.request("/sessions", { method: "POST", body: JSON.stringify({ tree }) });
  }

  getSession(id: string): Promise<SessionState> {
    return this.request(`/sessions/${id}`);
  }

  answer(id: string, label: string): Promise<SessionState> {
    return this.request(`/sessions/${id}/answer`, {
      method: "POST",
      body: JSON.stringify({ label }),
    });
  }

  undo(id: string): Promise<SessionState> {
    return this.request(`/sessions/${id}/undo`, { method: "POST" });
  }

  report(ids: string[]): Promise<ReportView> {
    return this.request("/reports", { method: "POST", body: JSON.stringify({ ids }) });
  }
}
