/** Shared builders: a canned session view and an in-memory fake service. */

import type {
  FormState,
  ReviewApi,
  ScoreView,
  SessionView,
  TechniqueListEntry,
  ValidationFinding,
} from "../src/api.js";
import { ApiError } from "../src/api.js";
import { cloneForm, emptyForm } from "../src/state.js";

export function sampleSessionView(): SessionView {
  const requirements = [
    {
      id: "C1",
      property: "C",
      base_text:
        "Data shall be protected from unauthorized observation and disclosure both in transit and when stored.",
      review_text:
        "Data shall be protected from unauthorized observation AND disclosure both in transit AND when stored.",
    },
    {
      id: "C2",
      property: "C",
      base_text: "System sessions shall be unique to each individual and cannot be shared.",
      review_text: "System sessions shall be unique to each individual AND cannot be shared.",
    },
    {
      id: "C3",
      property: "C",
      base_text: "System sessions are invalidated when timed out during periods of inactivity.",
      review_text: "System sessions are invalidated when timed out during periods of inactivity.",
    },
    {
      id: "C4",
      property: "C",
      base_text: "TLS protocol shall be used where sensitive data is transmitted.",
      review_text: "TLS protocol shall be used where sensitive data is transmitted.",
    },
    {
      id: "C5",
      property: "C",
      base_text: "System shall use strong encryption algorithm at all times.",
      review_text: "System shall use strong encryption algorithm (e.g., DES, AES, RSA) at all times.",
    },
  ];
  return {
    session_id: "s-test",
    technique_id: "US1",
    technique: {
      story: {
        id: "US1",
        role: "customer",
        feature: "be able to export my personal information",
        reason: "I can use it in other systems",
        raw_text:
          "As a customer, I want to be able to export my personal information so that I can use it in other systems.",
      },
      specifications: [
        { id: "SS1", story_id: "US1", text: "The system shall ensure that there is no residual data exposed." },
        { id: "SS2", story_id: "US1", text: "The system shall store credentials securely using the AES encryption algorithm." },
        { id: "SS3", story_id: "US1", text: "The system shall use the RSA encryption algorithm to protect all data all the time." },
        { id: "SS4", story_id: "US1", text: "The system shall inactivate a session when it exceeds certain periods of inactivity." },
        { id: "SS5", story_id: "US1", text: "The system shall encrypt the roles and privileges of the system." },
      ],
      link: {
        story_id: "US1",
        matched: [{ keyword: "export", properties: ["C"] }],
        properties: ["C"],
        fallback_applied: false,
      },
      requirements,
      questions: [
        {
          defect_type: "OM",
          text: "When comparing the security specifications with the OWASP high-level security requirements, are there high-level security requirements or characteristics that were not specified?",
        },
        { defect_type: "AM", text: "Does any security specification allow for multiple interpretations?" },
        { defect_type: "IS", text: "Are there two or more security specifications in conflict with one another?" },
        {
          defect_type: "IF",
          text: "Is there any security specification stating information that is not true under the conditions specified for the system?",
        },
      ],
    },
    state: "Created",
    started_at: null,
    submitted_at: null,
    form: null,
    version: 0,
    over_cap: false,
    cap_minutes: 60,
    duration_minutes: null,
  };
}

/** Minimal in-memory stand-in for the review service. */
export class FakeApi implements ReviewApi {
  view: SessionView;
  saveCalls: { form: FormState; version: number; draft: boolean }[] = [];
  rejectSubmitWith: ValidationFinding[] | null = null;

  constructor(view: SessionView = sampleSessionView()) {
    this.view = view;
  }

  private snapshot(): SessionView {
    return JSON.parse(JSON.stringify(this.view)) as SessionView;
  }

  async listTechniques(): Promise<TechniqueListEntry[]> {
    return [
      {
        technique_id: this.view.technique_id,
        story_text: this.view.technique.story.raw_text,
        properties: this.view.technique.link.properties,
        requirement_count: this.view.technique.requirements.length,
      },
    ];
  }

  async createSession(): Promise<{ session_id: string }> {
    return { session_id: this.view.session_id };
  }

  async getSession(): Promise<SessionView> {
    return this.snapshot();
  }

  async startSession(): Promise<SessionView> {
    if (this.view.state !== "Created") {
      throw new ApiError(409, "invalid-state", "already started");
    }
    this.view.state = "InProgress";
    this.view.started_at = new Date().toISOString();
    this.view.form = emptyForm(this.view.technique.requirements.map((r) => r.id));
    this.view.version += 1;
    return this.snapshot();
  }

  async saveReport(
    _sessionId: string,
    form: FormState,
    version: number,
    draft: boolean,
  ): Promise<SessionView> {
    if (this.view.state !== "InProgress") {
      throw new ApiError(409, "invalid-state", `cannot report in state ${this.view.state}`);
    }
    if (version !== this.view.version) {
      throw new ApiError(409, "version-conflict", "stale version");
    }
    this.saveCalls.push({ form: cloneForm(form), version, draft });
    if (!draft && this.rejectSubmitWith) {
      throw new ApiError(422, "validation-failed", "report failed validation", this.rejectSubmitWith);
    }
    this.view.form = cloneForm(form);
    this.view.version += 1;
    if (!draft) {
      this.view.state = "Submitted";
      this.view.submitted_at = new Date().toISOString();
    }
    return this.snapshot();
  }

  async score(): Promise<ScoreView> {
    return {
      true_positives: 6,
      total_seeded: 13,
      effectiveness: 6 / 13,
      duration_hours: 0.5,
      efficiency: 12,
      per_type: { OM: 2, AM: 1, IS: 2, IF: 1 },
    };
  }
}

export function flushAsync(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
