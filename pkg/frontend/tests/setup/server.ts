// Boots a fresh itil-forge server (empty data dir) for the test run.

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { BASE_URL, TOKEN } from "./constants.js";

let server: ChildProcess | undefined;

export default async function setup(): Promise<() => void> {
  const dir = mkdtempSync(join(tmpdir(), "forge-console-"));
  const configPath = join(dir, "config.json");
  writeFileSync(
    configPath,
    JSON.stringify({
      listen: new URL(BASE_URL).host,
      data_dir: join(dir, "data"),
      api_tokens: { [TOKEN]: "console-tester" },
    }),
  );
  server = spawn("python3", ["-m", "itil_forge", "serve", "--config", configPath], {
    stdio: ["ignore", "ignore", "inherit"],
  });
  let healthy = false;
  for (let attempt = 0; attempt < 150; attempt++) {
    try {
      const response = await fetch(`${BASE_URL}/health`);
      if (response.ok) {
        healthy = true;
        break;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  if (!healthy) {
    server.kill();
    throw new Error(`itil-forge server did not come up on ${BASE_URL}`);
  }
  return () => {
    server?.kill();
  };
}
