/**
 * Typed client for the cforge session service.  The server is the single
 * source of truth: every mutation returns the authoritative session
 * document and the UI re-renders from it.
 */

export interface ConjectureDoc {
  mode: string;
  target: string;
  body: string;
  domain: string;
  status: string;
  evidence: number;
  total: number;
  excluded: number;
  slack: number | null;
  touches: number | null;
  complexity: number;
  rendered: string;
}

export interface LineDoc {
  antecedents: string[];
  consequent: string;
  evidence: number;
}

export interface PendingItem {
  id: string;
  kind: "conjecture" | "sketch-line";
  rendered: string;
  evidence: number;
  total: number;
  conjecture?: ConjectureDoc;
  line?: LineDoc;
}

export interface TheoremDoc {
  hypothesis: string[];
  conclusion: string;
  source: string;
}

export interface ObjectDoc {
  label: string | null;
  encoding: string;
  origin: string;
}

export interface JobDoc {
  id: string;
  kind: string;
  status: "running" | "done" | "failed";
  result: Record<string, unknown> | null;
  error: { code: string; message: string } | null;
}

export interface SessionDoc {
  id: string;
  domain: string;
  object_count: number;
  objects: ObjectDoc[];
  concepts: string[];
  theorems: TheoremDoc[];
  pending: PendingItem[];
  resolved: Array<Record<string, unknown>>;
  subgoals: Array<Record<string, unknown>>;
  job: JobDoc | null;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail: Record<string, unknown>;
}

export class ApiError extends Error {
  constructor(public status: number, public body: ApiErrorBody) {
    super(body.message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    public baseUrl: string,
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body as ApiErrorBody);
    }
    return body as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  createSession(source: string | { kb: unknown }): Promise<SessionDoc> {
    const body = typeof source === "string" ? { source } : source;
    return this.request("/sessions", { method: "POST", body: JSON.stringify(body) });
  }

  getSession(id: string): Promise<SessionDoc> {
    return this.request(`/sessions/${id}`);
  }

  exportKb(id: string): Promise<unknown> {
    return this.request(`/sessions/${id}/export`);
  }

  /** Starts a generation job without waiting; poll it with pollJob. */
  async startConjectures(
    id: string,
    req: { target: string; mode: string; config?: Record<string, unknown> },
  ): Promise<JobDoc> {
    const doc = await this.request<{ job: JobDoc }>(
      `/sessions/${id}/conjectures?wait=false`,
      { method: "POST", body: JSON.stringify(req) },
    );
    return doc.job;
  }

  async startSketch(
    id: string,
    req: { hypothesis: string; conclusion: string; config?: Record<string, unknown> },
  ): Promise<JobDoc> {
    const doc = await this.request<{ job: JobDoc }>(
      `/sessions/${id}/sketches?wait=false`,
      { method: "POST", body: JSON.stringify(req) },
    );
    return doc.job;
  }

  getJob(sessionId: string, jobId: string): Promise<JobDoc> {
    return this.request(`/sessions/${sessionId}/jobs/${jobId}`);
  }

  /**
   * Poll a job until it leaves the running state (default 2 s cadence,
   * mirroring the service's poll contract).
   */
  async pollJob(
    sessionId: string,
    jobId: string,
    intervalMs = 2000,
    maxAttempts = 150,
  ): Promise<JobDoc> {
    for (let attempt = 0; attempt < maxAttempts; attempt++) {
      const job = await this.getJob(sessionId, jobId);
      if (job.status !== "running") return job;
      await sleep(intervalMs);
    }
    throw new Error(`job ${jobId} still running after ${maxAttempts} polls`);
  }

  submitVerdict(
    id: string,
    verdict: {
      subject: string;
      kind: "proved" | "refuted" | "needs-justification";
      counterexample?: { encoding: string; label?: string };
      note?: string;
    },
  ): Promise<SessionDoc> {
    return this.request(`/sessions/${id}/verdicts`, {
      method: "POST",
      body: JSON.stringify(verdict),
    });
  }
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
