/**
 * End-to-end: the console drives a real review service (spawned by the
 * global setup) through a complete session. The script reproduces the
 * worked walkthrough: C2 and C4 omitted, SS4 ambiguous, SS2+SS3
 * inconsistent, SS5 incorrect; the server-side score must be exactly 6.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import { ConsoleRenderer } from "../src/render.js";
import { flushAsync } from "./helpers.js";

const BASE_URL = process.env.FESRAS_BASE_URL ?? "";

function click(selector: string): void {
  const node = document.querySelector<HTMLElement>(selector);
  if (!node) throw new Error(`nothing matches ${selector}`);
  node.click();
}

async function waitFor(condition: () => boolean, what: string): Promise<void> {
  const deadline = Date.now() + 10_000;
  while (Date.now() < deadline) {
    if (condition()) return;
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
  throw new Error(`timed out waiting for ${what}`);
}

async function mountSession(api: ApiClient) {
  const { session_id } = await api.createSession("US1");
  const view = await api.getSession(session_id);
  const root = document.createElement("div");
  document.body.replaceChildren(root);
  const controller = new SessionController(api, view);
  new ConsoleRenderer(root, controller, null).mount();
  return { session_id, root, controller };
}

beforeEach(() => {
  document.body.replaceChildren();
});

describe.skipIf(!BASE_URL)("console against the live service", () => {
  it("reproduces the walkthrough review and scores six", async () => {
    const api = new ApiClient(BASE_URL);
    const { session_id, root, controller } = await mountSession(api);

    expect(root.textContent).toContain("Security Review: US1");
    click(".start-button");
    await waitFor(() => controller.view.state === "InProgress", "session start");
    expect(root.querySelectorAll("[data-requirement]")).toHaveLength(5);

    // omissions: C2 and C4 are not covered by the specifications
    click('input[data-om="C2"]');
    click('input[data-om="C4"]');

    // SS4 is ambiguous, noticed while checking C2
    click('input[data-am="C2:SS4"]');

    // SS2 and SS3 conflict: stage both, then add the group
    click('input[data-is-pick="C2:SS2"]');
    await flushAsync();
    click('input[data-is-pick="C2:SS3"]');
    await flushAsync();
    click('button[data-add-group="C2"]');

    // SS5 states an impossible fact
    click('input[data-if="C2:SS5"]');
    await controller.idle();

    click(".submit-button");
    await waitFor(() => controller.view.state === "Submitted", "submission");

    const score = await api.score(session_id, "key.json");
    expect(score.true_positives).toBe(6);
    expect(score.total_seeded).toBe(13);
    expect(score.per_type).toEqual({ OM: 2, AM: 1, IS: 2, IF: 1 });
  }, 30_000);

  it("rejects an undersized inconsistency group inline without data loss", async () => {
    const api = new ApiClient(BASE_URL);
    const { root, controller } = await mountSession(api);

    click(".start-button");
    await waitFor(() => controller.view.state === "InProgress", "session start");

    click('input[data-om="C4"]');

    // a singleton group: stage one id and add it anyway
    click('input[data-is-pick="C2:SS2"]');
    await flushAsync();
    click('button[data-add-group="C2"]');
    await controller.idle();
    expect(controller.form.rows[1].is).toEqual([["SS2"]]);

    click(".submit-button");
    await waitFor(() => controller.findings.length > 0, "validation findings");

    // still in progress, inline finding on the offending row, form intact
    expect(controller.view.state).toBe("InProgress");
    const row = root.querySelector('[data-requirement="C2"]')!;
    expect(row.querySelector(".row-findings")!.textContent).toContain("UndersizedGroup");
    expect(controller.form.rows[1].is).toEqual([["SS2"]]);
    expect(controller.form.rows[3].om).toBe(true);
    expect(root.querySelector<HTMLInputElement>('input[data-om="C4"]')!.checked).toBe(true);

    // fixing the group lets the submission through
    click('input[data-is-pick="C2:SS2"]');
    await flushAsync();
    click('input[data-is-pick="C2:SS3"]');
    await flushAsync();
    click('button[data-add-group="C2"]');
    await controller.idle();
    const fixed = controller.form.rows[1].is.filter((group) => group.length >= 2);
    expect(fixed).toContainEqual(["SS2", "SS3"]);

    // remove the stale singleton before resubmitting
    const singletonIndex = controller.form.rows[1].is.findIndex((g) => g.length < 2);
    click(`button[data-remove-group="C2:${singletonIndex}"]`);
    await controller.idle();

    click(".submit-button");
    await waitFor(() => controller.view.state === "Submitted", "resubmission");
  }, 30_000);
});
