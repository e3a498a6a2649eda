/**
 * Entry point. With ?session=<id> the console loads that session; without
 * it, a start page lists the generated techniques and creates a session on
 * demand. An optional ?key=<path> enables score display after submission.
 */

import { ApiClient } from "./api.js";
import { SessionController } from "./controller.js";
import { ConsoleRenderer } from "./render.js";

async function showStartPage(root: HTMLElement, api: ApiClient): Promise<void> {
  root.replaceChildren();
  const heading = document.createElement("h1");
  heading.textContent = "Security Requirement Reviews";
  root.appendChild(heading);

  const intro = document.createElement("p");
  intro.textContent = "Pick a user story to start a timed review session.";
  root.appendChild(intro);

  const list = document.createElement("ul");
  list.className = "technique-list";
  const techniques = await api.listTechniques();
  for (const technique of techniques) {
    const item = document.createElement("li");
    const button = document.createElement("button");
    button.className = "primary";
    button.textContent = `Review ${technique.technique_id}`;
    button.addEventListener("click", () => {
      void api.createSession(technique.technique_id).then(({ session_id }) => {
        const params = new URLSearchParams(window.location.search);
        params.set("session", session_id);
        window.location.search = params.toString();
      });
    });
    const summary = document.createElement("p");
    summary.textContent =
      `${technique.story_text} (properties ${technique.properties.join(", ")}, ` +
      `${technique.requirement_count} requirements)`;
    item.appendChild(button);
    item.appendChild(summary);
    list.appendChild(item);
  }
  root.appendChild(list);
}

export async function boot(root: HTMLElement, baseUrl = ""): Promise<void> {
  const api = new ApiClient(baseUrl);
  const params = new URLSearchParams(window.location.search);
  const sessionId = params.get("session");
  if (!sessionId) {
    await showStartPage(root, api);
    return;
  }
  const view = await api.getSession(sessionId);
  const controller = new SessionController(api, view);
  const renderer = new ConsoleRenderer(root, controller, params.get("key"));
  renderer.mount();
}

const rootElement = document.getElementById("app");
if (rootElement) {
  void boot(rootElement).catch((error: unknown) => {
    rootElement.textContent = error instanceof Error ? error.message : String(error);
  });
}
