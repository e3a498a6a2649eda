/**
 * Session lifecycle driver: holds the working copy of the form, pushes
 * every edit to the server as a draft, and performs the final submit.
 *
 * Draft saves are serialized: at most one request is in flight and only
 * the newest dirty form is sent next, so a burst of edits costs at most
 * one trailing request. A browser crash therefore loses at most the very
 * last edit.
 */

import { ApiError } from "./api.js";
import type { ReviewApi } from "./api.js";
import type { FormState, ScoreView, SessionView, ValidationFinding } from "./api.js";
import { cloneForm, emptyForm } from "./state.js";

export type Listener = (controller: SessionController) => void;

export class SessionController {
  view: SessionView;
  form: FormState;
  findings: ValidationFinding[] = [];
  notice: string | null = null;
  private dirty = false;
  private flushPromise: Promise<void> | null = null;
  private listeners: Listener[] = [];

  constructor(
    private readonly api: ReviewApi,
    view: SessionView,
  ) {
    this.view = view;
    this.form = view.form
      ? cloneForm(view.form)
      : emptyForm(view.technique.requirements.map((r) => r.id));
  }

  get sessionId(): string {
    return this.view.session_id;
  }

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this);
  }

  async start(): Promise<void> {
    this.view = await this.api.startSession(this.sessionId);
    this.form = cloneForm(this.view.form!);
    this.emit();
  }

  /** Apply a pure form update and schedule an eager draft save. */
  update(change: (form: FormState) => FormState): void {
    if (this.view.state !== "InProgress") {
      return;
    }
    this.form = change(this.form);
    this.dirty = true;
    this.emit();
    if (!this.flushPromise) {
      this.flushPromise = this.flush().finally(() => {
        this.flushPromise = null;
      });
    }
  }

  /** Resolves once every scheduled draft save has reached the server. */
  async idle(): Promise<void> {
    while (this.flushPromise) {
      await this.flushPromise;
    }
  }

  private async flush(): Promise<void> {
    while (this.dirty && this.view.state === "InProgress") {
      this.dirty = false;
      const snapshot = cloneForm(this.form);
      try {
        this.view = await this.api.saveReport(
          this.sessionId,
          snapshot,
          this.view.version,
          true,
        );
      } catch (error) {
        if (error instanceof ApiError && error.code === "version-conflict") {
          await this.reloadFromServer(
            "Session was changed elsewhere; reloaded the saved form.",
          );
        } else {
          this.notice = "Draft save failed; your entries are kept locally.";
          this.emit();
          return;
        }
      }
    }
  }

  private async reloadFromServer(notice: string): Promise<void> {
    this.view = await this.api.getSession(this.sessionId);
    if (this.view.form) {
      this.form = cloneForm(this.view.form);
    }
    this.dirty = false;
    this.notice = notice;
    this.emit();
  }

  /**
   * Final submit. Validation failures keep the session in progress and the
   * entered form untouched; the findings are exposed for inline rendering.
   */
  async submit(): Promise<boolean> {
    await this.idle();
    this.findings = [];
    this.notice = null;
    try {
      this.view = await this.api.saveReport(
        this.sessionId,
        this.form,
        this.view.version,
        false,
      );
      this.form = cloneForm(this.view.form!);
      this.emit();
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        if (error.code === "validation-failed") {
          this.findings = error.findings;
          this.notice = "The report was not accepted; fix the marked rows and submit again.";
          this.emit();
          return false;
        }
        if (error.code === "version-conflict") {
          await this.reloadFromServer(
            "Session was changed elsewhere; review the reloaded form and submit again.",
          );
          return false;
        }
        this.notice = error.message;
        this.emit();
        return false;
      }
      throw error;
    }
  }

  score(keyPath: string): Promise<ScoreView> {
    return this.api.score(this.sessionId, keyPath);
  }

  findingsForRow(requirementId: string): ValidationFinding[] {
    return this.findings.filter((f) => f.requirement_id === requirementId);
  }

  generalFindings(): ValidationFinding[] {
    return this.findings.filter((f) => f.requirement_id === null);
  }
}
