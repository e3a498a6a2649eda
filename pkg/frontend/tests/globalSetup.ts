/**
 * Boots a real review service for the e2e test: generates the techniques
 * from the shared fixtures into a temp data directory, copies the answer
 * key next to them, and runs the server on a free port. The base URL is
 * handed to tests through FESRAS_BASE_URL.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, cpSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

const HERE = dirname(fileURLToPath(import.meta.url));
const REPO_ROOT = resolve(HERE, "..", "..");
const FIXTURES = join(REPO_ROOT, "tests", "fixtures");
const PORT = 8960 + Math.floor(Math.random() * 500);

let server: ChildProcess | null = null;

async function waitForServer(baseUrl: string): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${baseUrl}/api/techniques`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolvePause) => setTimeout(resolvePause, 250));
  }
  throw new Error(`review service did not come up at ${baseUrl}`);
}

export async function setup(): Promise<void> {
  const dataDir = mkdtempSync(join(tmpdir(), "fesras-console-"));

  const generate = spawnSync(
    "python3",
    [
      "-m", "fesras.cli",
      "generate",
      "--stories", join(FIXTURES, "stories.json"),
      "--out", join(dataDir, "techniques"),
    ],
    { cwd: REPO_ROOT, encoding: "utf-8" },
  );
  if (generate.status !== 0) {
    throw new Error(`technique generation failed:\n${generate.stdout}\n${generate.stderr}`);
  }
  cpSync(join(FIXTURES, "answer_key.json"), join(dataDir, "key.json"));

  server = spawn(
    "python3",
    ["-m", "fesras.cli", "serve", "--port", String(PORT), "--data", dataDir],
    { cwd: REPO_ROOT, stdio: "ignore" },
  );

  const baseUrl = `http://127.0.0.1:${PORT}`;
  await waitForServer(baseUrl);
  process.env.FESRAS_BASE_URL = baseUrl;
}

export async function teardown(): Promise<void> {
  if (server && !server.killed) {
    server.kill("SIGTERM");
  }
}
