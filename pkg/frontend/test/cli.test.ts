/** Exercises the built node CLI end to end (requires `npm run build`). */

import { spawnSync } from "node:child_process";
import { existsSync, mkdirSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

const CLI = join(__dirname, "..", "dist", "cli.js");

function run(args: string[]) {
  return spawnSync("node", [CLI, ...args], { encoding: "utf-8" });
}

function makeDataset(root: string) {
  for (const label of ["Pataka", "Mushti"]) {
    mkdirSync(join(root, label), { recursive: true });
    for (let i = 0; i < 3; i++) {
      writeFileSync(join(root, label, `img-${i}.png`), "fake-image-bytes");
    }
  }
  writeFileSync(join(root, "Pataka", "blank.png"), ""); // zero bytes -> no hand
  writeFileSync(join(root, "Pataka", "notes.txt"), "not an image");
}

let dir: string;

beforeAll(() => {
  if (!existsSync(CLI)) {
    throw new Error("dist/cli.js missing; run `npm run build` before tests");
  }
  dir = mkdtempSync(join(tmpdir(), "mudra-cli-"));
});

describe("extract-images", () => {
  it("walks class directories and writes a manifest with provenance", () => {
    const data = join(dir, "data");
    makeDataset(data);
    const out = join(dir, "manifest.jsonl");
    const result = run(["extract-images", "--input", data, "--output", out]);
    expect(result.status, result.stderr).toBe(0);
    const summary = JSON.parse(result.stdout);
    expect(summary.total).toBe(7); // 6 images + 1 blank; .txt ignored
    expect(summary.extracted).toBe(6);
    expect(summary.rejected).toEqual([
      { id: "Pataka/blank.png", reason: "no hand detected" },
    ]);
    expect(summary.model).toBe("stub-hash-detector");

    const lines = readFileSync(out, "utf-8").trim().split("\n");
    const header = JSON.parse(lines[0]);
    expect(header.format).toBe("gesture-manifest");
    expect(header.model).toBe("stub-hash-detector");
    expect(header.coordinates).toBe("image-relative");
    expect(lines).toHaveLength(1 + 6);
  });

  it("is deterministic across runs", () => {
    const data = join(dir, "data2");
    makeDataset(data);
    const outA = join(dir, "a.jsonl");
    const outB = join(dir, "b.jsonl");
    run(["extract-images", "--input", data, "--output", outA]);
    run(["extract-images", "--input", data, "--output", outB]);
    expect(readFileSync(outA, "utf-8")).toBe(readFileSync(outB, "utf-8"));
  });

  it("refuses the browser-only detector with a pointer to the web app", () => {
    const result = run([
      "extract-images", "--input", dir, "--output", join(dir, "x.jsonl"),
      "--detector", "mediapipe",
    ]);
    expect(result.status).not.toBe(0);
    expect(result.stderr).toMatch(/web app/);
  });
});

describe("validate", () => {
  it("accepts its own output", () => {
    const data = join(dir, "data3");
    makeDataset(data);
    const out = join(dir, "v.jsonl");
    run(["extract-images", "--input", data, "--output", out]);
    const result = run(["validate", "--input", out]);
    expect(result.status, result.stderr).toBe(0);
    expect(JSON.parse(result.stdout).frames).toBe(6);
  });

  it("flags malformed lines with their number", () => {
    const bad = join(dir, "bad.jsonl");
    writeFileSync(bad, '{"format": "gesture-manifest", "version": 1}\n{"landmarks": []}\n');
    const result = run(["validate", "--input", bad]);
    expect(result.status).toBe(1);
    expect(result.stderr).toMatch(/line 2/);
  });
});
