// Typed client for the repair service. Every domain result (edits,
// repaired graphs, similarities) comes from here; the UI computes none
// of them locally.

export interface RepairResponse {
  edit: string;
  repaired_dot: string;
  feedback_source: "user" | "memory" | "none";
  corrector: string;
  similarity: number | null;
  retrieved_id: number | null;
  note: string | null;
}

export interface FeedbackResponse {
  record_id: number;
}

export interface MemoryBrief {
  id: number;
  goal: string | null;
  feedback: string;
  edit: string | null;
  created_at: string;
  similarity?: number;
}

export interface MemoryPage {
  total: number;
  records: MemoryBrief[];
}

export interface MemoryDetail {
  id: number;
  goal: string | null;
  script_dot: string;
  feedback: string;
  edit: string | null;
  created_at: string;
}

export interface Health {
  status: string;
  memory_size: number;
  embedding_backend: string;
  backend_reachable: boolean;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function unwrap<T>(resp: Response): Promise<T> {
  if (resp.ok) return (await resp.json()) as T;
  let detail = `${resp.status} ${resp.statusText}`;
  try {
    const body = await resp.json();
    if (typeof body.detail === "string") detail = body.detail;
    else if (body.detail) detail = JSON.stringify(body.detail);
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(resp.status, detail);
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private post<T>(path: string, body: unknown): Promise<T> {
    return fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => unwrap<T>(r));
  }

  private get<T>(path: string, params?: Record<string, string>): Promise<T> {
    const query = params ? "?" + new URLSearchParams(params).toString() : "";
    return fetch(this.baseUrl + path + query).then((r) => unwrap<T>(r));
  }

  repair(scriptDot: string, feedback?: string, corrector?: string): Promise<RepairResponse> {
    const body: Record<string, string> = { script_dot: scriptDot };
    if (feedback) body.feedback = feedback;
    if (corrector) body.corrector = corrector;
    return this.post("/repair", body);
  }

  writeFeedback(scriptDot: string, feedback: string, edit?: string): Promise<FeedbackResponse> {
    const body: Record<string, string> = { script_dot: scriptDot, feedback };
    if (edit) body.edit = edit;
    return this.post("/feedback", body);
  }

  memoryList(offset = 0, limit = 50): Promise<MemoryPage> {
    return this.get("/memory", { offset: String(offset), limit: String(limit) });
  }

  memorySearch(queryDot: string, k: number): Promise<MemoryPage> {
    return this.get("/memory", { query_dot: queryDot, k: String(k) });
  }

  memoryDetail(id: number): Promise<MemoryDetail> {
    return this.get(`/memory/${id}`);
  }

  healthz(): Promise<Health> {
    return this.get("/healthz");
  }
}
