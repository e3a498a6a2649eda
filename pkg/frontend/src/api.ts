/**
 * Typed client for the review session API.
 *
 * All payloads are JSON; errors arrive as {code, message} bodies (plus a
 * findings list when a submitted report fails validation) and are thrown
 * as ApiError so callers can render them without string matching.
 */

export interface StoryView {
  id: string;
  role: string;
  feature: string;
  reason: string;
  raw_text: string;
}

export interface SpecificationView {
  id: string;
  story_id: string;
  text: string;
}

export interface RequirementView {
  id: string;
  property: string;
  base_text: string;
  review_text: string;
}

export interface QuestionView {
  defect_type: string;
  text: string;
}

export interface LinkView {
  story_id: string;
  matched: { keyword: string; properties: string[] }[];
  properties: string[];
  fallback_applied: boolean;
}

export interface TechniqueView {
  story: StoryView;
  specifications: SpecificationView[];
  link: LinkView;
  requirements: RequirementView[];
  questions: QuestionView[];
}

export interface FormRowState {
  requirement_id: string;
  om: boolean;
  am: string[];
  is: string[][];
  if: string[];
}

export interface FormState {
  rows: FormRowState[];
  free_findings: { defect_type: string; description: string }[];
}

export interface SessionView {
  session_id: string;
  technique_id: string;
  technique: TechniqueView;
  state: "Created" | "InProgress" | "Submitted";
  started_at: string | null;
  submitted_at: string | null;
  form: FormState | null;
  version: number;
  over_cap: boolean;
  cap_minutes: number;
  duration_minutes: number | null;
}

export interface ValidationFinding {
  code: string;
  story_id: string;
  message: string;
  requirement_id: string | null;
}

export interface ScoreView {
  true_positives: number;
  total_seeded: number;
  effectiveness: number;
  duration_hours: number;
  efficiency: number;
  per_type: Record<string, number>;
}

export interface TechniqueListEntry {
  technique_id: string;
  story_text: string;
  properties: string[];
  requirement_count: number;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly findings: ValidationFinding[];

  constructor(status: number, code: string, message: string, findings: ValidationFinding[] = []) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.findings = findings;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "unknown";
  let message = `request failed with status ${response.status}`;
  let findings: ValidationFinding[] = [];
  try {
    const body = await response.json();
    if (typeof body.code === "string") code = body.code;
    if (typeof body.message === "string") message = body.message;
    if (Array.isArray(body.findings)) findings = body.findings;
  } catch {
    // non-JSON error body; keep the generic message
  }
  return new ApiError(response.status, code, message, findings);
}

/** The service surface the console consumes; ApiClient is the live wiring. */
export interface ReviewApi {
  listTechniques(): Promise<TechniqueListEntry[]>;
  createSession(techniqueId: string): Promise<{ session_id: string }>;
  getSession(sessionId: string): Promise<SessionView>;
  startSession(sessionId: string): Promise<SessionView>;
  saveReport(
    sessionId: string,
    form: FormState,
    version: number,
    draft: boolean,
  ): Promise<SessionView>;
  score(sessionId: string, keyPath: string): Promise<ScoreView>;
}

export class ApiClient implements ReviewApi {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  }

  listTechniques(): Promise<TechniqueListEntry[]> {
    return this.request<TechniqueListEntry[]>("/api/techniques");
  }

  createSession(techniqueId: string): Promise<{ session_id: string }> {
    return this.post<{ session_id: string }>("/api/sessions", { technique_id: techniqueId });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request<SessionView>(`/api/sessions/${sessionId}`);
  }

  startSession(sessionId: string): Promise<SessionView> {
    return this.post<SessionView>(`/api/sessions/${sessionId}/start`);
  }

  saveReport(
    sessionId: string,
    form: FormState,
    version: number,
    draft: boolean,
  ): Promise<SessionView> {
    return this.post<SessionView>(`/api/sessions/${sessionId}/report`, {
      form,
      version,
      draft,
    });
  }

  score(sessionId: string, keyPath: string): Promise<ScoreView> {
    const params = new URLSearchParams({ key: keyPath });
    return this.request<ScoreView>(`/api/sessions/${sessionId}/score?${params}`);
  }
}
