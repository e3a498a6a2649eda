/**
 * DOM rendering for the review console.
 *
 * The console re-renders the whole session view on every state change;
 * at a handful of requirement rows that is cheap and keeps the DOM a pure
 * function of (session view, form state, staged selections). Staged
 * inconsistency selections live in the renderer, not in the form, until
 * the inspector adds them as a group.
 */

import type { RequirementView, SessionView } from "./api.js";
import { SessionController } from "./controller.js";
import { addGroup, removeGroup, toggleMark, toggleOmission, undersizedGroupRows } from "./state.js";
import { SessionTimer } from "./timer.js";

const DEFECT_LABELS: Record<string, string> = {
  OM: "Omission",
  AM: "Ambiguity",
  IS: "Inconsistency",
  IF: "Incorrect Fact",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Review texts emphasize AND where both aspects must hold; keep it visible. */
export function emphasizedText(text: string): DocumentFragment {
  const fragment = document.createDocumentFragment();
  const parts = text.split(/\b(AND)\b/);
  for (const part of parts) {
    if (part === "AND") {
      const strong = el("strong", "emphasis-and", "AND");
      fragment.appendChild(strong);
    } else if (part) {
      fragment.appendChild(document.createTextNode(part));
    }
  }
  return fragment;
}

export class ConsoleRenderer {
  private staged = new Map<string, Set<string>>();
  private timer: SessionTimer | null = null;
  private timerDisplay = "00:00";
  private timerOverCap = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly controller: SessionController,
    private readonly scoreKey: string | null = null,
  ) {
    controller.onChange(() => this.render());
  }

  stagedFor(requirementId: string): Set<string> {
    let selection = this.staged.get(requirementId);
    if (!selection) {
      selection = new Set();
      this.staged.set(requirementId, selection);
    }
    return selection;
  }

  mount(): void {
    this.syncTimer();
    this.render();
  }

  private syncTimer(): void {
    const view = this.controller.view;
    if (view.state === "InProgress" && view.started_at && !this.timer) {
      this.timer = new SessionTimer(view.started_at, view.cap_minutes, (display, overCap) => {
        const changed = display !== this.timerDisplay || overCap !== this.timerOverCap;
        this.timerDisplay = display;
        this.timerOverCap = overCap;
        if (changed) this.renderTimerOnly();
      });
      this.timer.start();
    }
    if (view.state === "Submitted" && this.timer) {
      this.timer.stop();
      this.timer = null;
    }
  }

  private renderTimerOnly(): void {
    const display = this.root.querySelector<HTMLElement>("[data-timer]");
    if (display) display.textContent = this.timerDisplay;
    const banner = this.root.querySelector<HTMLElement>("[data-cap-banner]");
    if (banner) banner.hidden = !this.timerOverCap;
  }

  render(): void {
    this.syncTimer();
    const view = this.controller.view;
    this.root.replaceChildren();
    this.root.appendChild(this.header(view));
    if (this.controller.notice) {
      this.root.appendChild(el("div", "notice", this.controller.notice));
    }
    const layout = el("div", "layout");
    layout.appendChild(this.mainColumn(view));
    layout.appendChild(this.questionSidebar(view));
    this.root.appendChild(layout);
  }

  private header(view: SessionView): HTMLElement {
    const header = el("header", "session-header");
    header.appendChild(el("h1", undefined, `Security Review: ${view.technique.story.id}`));

    const status = el("div", "status-line");
    status.appendChild(el("span", `state state-${view.state.toLowerCase()}`, view.state));
    const timer = el("span", "timer");
    timer.setAttribute("data-timer", "");
    timer.textContent = view.state === "Created" ? "not started" : this.timerDisplay;
    status.appendChild(timer);
    header.appendChild(status);

    const banner = el(
      "div",
      "cap-banner",
      `This review has passed the ${view.cap_minutes}-minute guideline. ` +
        "You can still submit; the overrun is recorded.",
    );
    banner.setAttribute("data-cap-banner", "");
    banner.hidden = !(this.timerOverCap || view.over_cap);
    header.appendChild(banner);

    if (view.state === "Created") {
      const start = el("button", "primary start-button", "Start review");
      start.addEventListener("click", () => {
        void this.controller.start();
      });
      header.appendChild(start);
    }
    return header;
  }

  private mainColumn(view: SessionView): HTMLElement {
    const main = el("main", "main-column");
    main.appendChild(this.storyPanel(view));
    if (view.state !== "Created") {
      main.appendChild(this.formPanel(view));
    }
    if (view.state === "Submitted") {
      main.appendChild(this.submittedPanel(view));
    }
    return main;
  }

  private storyPanel(view: SessionView): HTMLElement {
    const panel = el("section", "panel story-panel");
    panel.appendChild(el("h2", undefined, "User Story"));
    panel.appendChild(el("p", "story-text", view.technique.story.raw_text));

    panel.appendChild(el("h2", undefined, "Security Specifications"));
    const specs = el("ul", "spec-list");
    for (const spec of view.technique.specifications) {
      const item = el("li");
      item.appendChild(el("strong", undefined, `${spec.id}. `));
      item.appendChild(document.createTextNode(spec.text));
      specs.appendChild(item);
    }
    panel.appendChild(specs);

    panel.appendChild(el("h2", undefined, "Linked Security Properties"));
    const properties = el("p", "property-line", view.technique.link.properties.join(", "));
    panel.appendChild(properties);
    if (view.technique.link.fallback_applied) {
      panel.appendChild(
        el("p", "fallback-note", "No keyword matched; all properties are in scope."),
      );
    }
    return panel;
  }

  private formPanel(view: SessionView): HTMLElement {
    const panel = el("section", "panel form-panel");
    panel.appendChild(el("h2", undefined, "Defect Reporting Form"));

    const general = this.controller.generalFindings();
    if (general.length > 0) {
      const list = el("ul", "findings general-findings");
      for (const finding of general) {
        list.appendChild(el("li", undefined, finding.message));
      }
      panel.appendChild(list);
    }

    for (const requirement of view.technique.requirements) {
      panel.appendChild(this.requirementRow(view, requirement));
    }

    if (view.state === "InProgress") {
      const footer = el("div", "form-footer");
      const undersized = undersizedGroupRows(this.controller.form);
      if (undersized.length > 0) {
        footer.appendChild(
          el(
            "p",
            "hint",
            `Inconsistency groups need at least two specifications (check ${undersized.join(", ")}).`,
          ),
        );
      }
      const submit = el("button", "primary submit-button", "Submit report");
      submit.addEventListener("click", () => {
        void this.controller.submit();
      });
      footer.appendChild(submit);
      panel.appendChild(footer);
    }
    return panel;
  }

  private requirementRow(view: SessionView, requirement: RequirementView): HTMLElement {
    const controller = this.controller;
    const row = controller.form.rows.find((r) => r.requirement_id === requirement.id);
    const container = el("article", "requirement-row");
    container.setAttribute("data-requirement", requirement.id);

    const title = el("h3", "requirement-title");
    title.appendChild(el("span", "requirement-id", `${requirement.id}. `));
    title.appendChild(emphasizedText(requirement.review_text));
    container.appendChild(title);

    const rowFindings = controller.findingsForRow(requirement.id);
    if (rowFindings.length > 0) {
      const list = el("ul", "findings row-findings");
      for (const finding of rowFindings) {
        list.appendChild(el("li", undefined, `${finding.code}: ${finding.message}`));
      }
      container.appendChild(list);
    }

    if (!row) {
      return container;
    }
    const editable = view.state === "InProgress";
    const columns = el("div", "defect-columns");

    const omColumn = el("div", "defect-column om-column");
    omColumn.appendChild(el("h4", undefined, "OM"));
    const omLabel = el("label", "om-toggle");
    const omBox = el("input") as HTMLInputElement;
    omBox.type = "checkbox";
    omBox.checked = row.om;
    omBox.disabled = !editable;
    omBox.setAttribute("data-om", requirement.id);
    omBox.addEventListener("change", () => {
      controller.update((form) => toggleOmission(form, requirement.id));
    });
    omLabel.appendChild(omBox);
    omLabel.appendChild(document.createTextNode(" requirement not covered"));
    omColumn.appendChild(omLabel);
    columns.appendChild(omColumn);

    columns.appendChild(this.markColumn(view, requirement.id, "am", row.am, editable));
    columns.appendChild(this.groupColumn(view, requirement.id, row.is, editable));
    columns.appendChild(this.markColumn(view, requirement.id, "if", row.if, editable));

    container.appendChild(columns);
    return container;
  }

  private markColumn(
    view: SessionView,
    requirementId: string,
    column: "am" | "if",
    marked: string[],
    editable: boolean,
  ): HTMLElement {
    const wrapper = el("div", `defect-column ${column}-column`);
    wrapper.appendChild(el("h4", undefined, column.toUpperCase()));
    for (const spec of view.technique.specifications) {
      const label = el("label", "spec-toggle");
      const box = el("input") as HTMLInputElement;
      box.type = "checkbox";
      box.checked = marked.includes(spec.id);
      box.disabled = !editable;
      box.setAttribute(`data-${column}`, `${requirementId}:${spec.id}`);
      box.addEventListener("change", () => {
        this.controller.update((form) => toggleMark(form, requirementId, column, spec.id));
      });
      label.appendChild(box);
      label.appendChild(document.createTextNode(` ${spec.id}`));
      wrapper.appendChild(label);
    }
    return wrapper;
  }

  private groupColumn(
    view: SessionView,
    requirementId: string,
    groups: string[][],
    editable: boolean,
  ): HTMLElement {
    const wrapper = el("div", "defect-column is-column");
    wrapper.appendChild(el("h4", undefined, "IS"));

    const existing = el("ul", "group-list");
    groups.forEach((group, index) => {
      const item = el("li", "group-chip", group.join(" + "));
      if (new Set(group).size < 2) {
        item.classList.add("undersized");
        item.title = "Needs at least two specifications";
      }
      if (editable) {
        const remove = el("button", "remove-group", "remove");
        remove.setAttribute("data-remove-group", `${requirementId}:${index}`);
        remove.addEventListener("click", () => {
          this.controller.update((form) => removeGroup(form, requirementId, index));
        });
        item.appendChild(remove);
      }
      existing.appendChild(item);
    });
    wrapper.appendChild(existing);

    if (editable) {
      const staged = this.stagedFor(requirementId);
      for (const spec of view.technique.specifications) {
        const label = el("label", "spec-toggle");
        const box = el("input") as HTMLInputElement;
        box.type = "checkbox";
        box.checked = staged.has(spec.id);
        box.setAttribute("data-is-pick", `${requirementId}:${spec.id}`);
        box.addEventListener("change", () => {
          if (box.checked) staged.add(spec.id);
          else staged.delete(spec.id);
          this.render();
        });
        label.appendChild(box);
        label.appendChild(document.createTextNode(` ${spec.id}`));
        wrapper.appendChild(label);
      }
      const add = el("button", "add-group", "Add group");
      add.setAttribute("data-add-group", requirementId);
      add.disabled = staged.size === 0;
      add.addEventListener("click", () => {
        const selection = [...staged];
        staged.clear();
        this.controller.update((form) => addGroup(form, requirementId, selection));
      });
      wrapper.appendChild(add);
    }
    return wrapper;
  }

  private questionSidebar(view: SessionView): HTMLElement {
    const aside = el("aside", "question-sidebar");
    aside.appendChild(el("h2", undefined, "Verification Questions"));
    const list = el("ol", "question-list");
    for (const question of view.technique.questions) {
      const item = el("li", "question");
      const label = DEFECT_LABELS[question.defect_type] ?? question.defect_type;
      item.appendChild(el("strong", undefined, `${label} (${question.defect_type})`));
      item.appendChild(el("p", undefined, question.text));
      list.appendChild(item);
    }
    aside.appendChild(list);
    return aside;
  }

  private submittedPanel(view: SessionView): HTMLElement {
    const panel = el("section", "panel submitted-panel");
    panel.appendChild(el("h2", undefined, "Report submitted"));
    panel.appendChild(
      el(
        "p",
        undefined,
        `Submitted at ${view.submitted_at ?? "?"} after ` +
          `${view.duration_minutes?.toFixed(1) ?? "?"} minutes.`,
      ),
    );
    if (this.scoreKey) {
      const keyPath = this.scoreKey;
      const button = el("button", "score-button", "Fetch score");
      const output = el("pre", "score-output");
      button.addEventListener("click", () => {
        void this.controller
          .score(keyPath)
          .then((result) => {
            output.textContent = JSON.stringify(result, null, 2);
          })
          .catch((error: unknown) => {
            output.textContent = error instanceof Error ? error.message : String(error);
          });
      });
      panel.appendChild(button);
      panel.appendChild(output);
    }
    return panel;
  }
}
