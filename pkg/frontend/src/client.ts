import { Choice, ModelResponse, SessionView } from "./types.js";

export interface SessionRequest {
  n: number;
  m?: number;
  k?: number;
  learner?: "tree" | "kbounded";
  mode?: "complete" | "incomplete";
  universal?: number[][];
  names?: string[];
  value_names?: string[][];
}

export interface AnswerResult {
  view: SessionView | null;
  /** inline message when the service rejected the answer (409/422) */
  error: string | null;
}

/**
 * Thin wrapper over the session API.  Each answer carries a client-side
 * sequence number (the count of answers already accepted), so a duplicate
 * click or an idempotent retry of an already-delivered answer is a no-op.
 */
export class ApiClient {
  private nextSeq = 0;

  constructor(private baseUrl: string) {}

  async createSession(req: SessionRequest): Promise<SessionView> {
    const res = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
    if (!res.ok) {
      throw new Error(`create failed: ${res.status} ${await res.text()}`);
    }
    this.nextSeq = 0;
    return (await res.json()) as SessionView;
  }

  async getSession(id: string): Promise<SessionView> {
    const res = await fetch(`${this.baseUrl}/sessions/${id}`);
    if (!res.ok) {
      throw new Error(`status failed: ${res.status}`);
    }
    return (await res.json()) as SessionView;
  }

  /**
   * Post an answer for the prompt with the given sequence number.
   * Returns null view without touching the network when seq is stale.
   */
  async submitAnswer(id: string, seq: number, choice: Choice): Promise<AnswerResult> {
    if (seq !== this.nextSeq) {
      return { view: null, error: null }; // duplicate click / already answered
    }
    const res = await fetch(`${this.baseUrl}/sessions/${id}/answer`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ answer: choice }),
    });
    if (res.status === 409 || res.status === 422) {
      const body = await res.json().catch(() => ({ detail: res.statusText }));
      return { view: null, error: String(body.detail ?? res.statusText) };
    }
    if (!res.ok) {
      throw new Error(`answer failed: ${res.status}`);
    }
    this.nextSeq = seq + 1;
    return { view: (await res.json()) as SessionView, error: null };
  }

  async getModel(id: string): Promise<ModelResponse> {
    const res = await fetch(`${this.baseUrl}/sessions/${id}/model`);
    if (!res.ok) {
      throw new Error(`model failed: ${res.status}`);
    }
    return (await res.json()) as ModelResponse;
  }

  async deleteSession(id: string): Promise<void> {
    await fetch(`${this.baseUrl}/sessions/${id}`, { method: "DELETE" });
  }

  get sequence(): number {
    return this.nextSeq;
  }
}
