#!/usr/bin/env node
/**
 * Node CLI: batch-extract labeled image directories into the engine's
 * manifest JSONL, and validate JSONL files against the wire schemas.
 *
 *   extract-images --input data/ --output manifest.jsonl [--min-confidence 0.5]
 *   validate --input manifest.jsonl
 *
 * Directory layout: one subdirectory per class, images inside.  The
 * mediapipe detector needs browser APIs plus model assets, so node
 * extraction runs the deterministic stub unless a custom detector
 * module is supplied with --detector (must export createDetector()).
 */

import { readdirSync, readFileSync, statSync, writeFileSync } from "node:fs";
import { basename, join } from "node:path";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { extractImages, LabeledImage, LandmarkDetector, provenanceHeader, toJsonl } from "./extractor.js";
import { StubDetector, StubImage } from "./stub.js";
import { parseRecordLine } from "./wire.js";

const IMAGE_EXTENSIONS = new Set([".jpg", ".jpeg", ".png", ".webp", ".bmp"]);

function isImageFile(name: string): boolean {
  const dot = name.lastIndexOf(".");
  return dot >= 0 && IMAGE_EXTENSIONS.has(name.slice(dot).toLowerCase());
}

export function walkDataset(root: string): LabeledImage<StubImage>[] {
  const images: LabeledImage<StubImage>[] = [];
  const classes = readdirSync(root, { withFileTypes: true })
    .filter((entry) => entry.isDirectory())
    .map((entry) => entry.name)
    .sort();
  for (const label of classes) {
    const dir = join(root, label);
    const files = readdirSync(dir).filter(isImageFile).sort();
    for (const file of files) {
      const id = `${label}/${file}`;
      const size = statSync(join(dir, file)).size;
      images.push({ id, label, image: { id, size, label } });
    }
  }
  return images;
}

async function loadDetector(spec: string | undefined): Promise<LandmarkDetector<StubImage>> {
  if (!spec || spec === "stub") return new StubDetector();
  if (spec === "mediapipe") {
    throw new Error(
      "the mediapipe detector needs browser APIs and model assets; " +
        "use the web app for real extraction, or pass --detector <module.js>"
    );
  }
  const mod = await import(pathToFileURL(spec).href);
  if (typeof mod.createDetector !== "function") {
    throw new Error(`detector module ${spec} does not export createDetector()`);
  }
  return mod.createDetector();
}

async function cmdExtractImages(args: Record<string, string | undefined>): Promise<number> {
  const input = args.input;
  const output = args.output;
  if (!input || !output) {
    console.error("extract-images requires --input and --output");
    return 1;
  }
  const minConfidence = Number(args["min-confidence"] ?? "0.5");
  const detector = await loadDetector(args.detector);
  const { records, summary } = await extractImages(detector, walkDataset(input), {
    minConfidence,
    hands: "best",
  });
  writeFileSync(output, toJsonl(records, provenanceHeader(detector, minConfidence)));
  console.log(JSON.stringify(summary, null, 2));
  return 0;
}

function cmdValidate(args: Record<string, string | undefined>): number {
  const input = args.input;
  if (!input) {
    console.error("validate requires --input");
    return 1;
  }
  const lines = readFileSync(input, "utf-8").split("\n");
  let frames = 0;
  let lineno = 0;
  for (const line of lines) {
    lineno += 1;
    if (!line.trim()) continue;
    try {
      if (parseRecordLine(line, lineno) !== null) frames += 1;
    } catch (err) {
      console.error(`${basename(input)}: ${String(err instanceof Error ? err.message : err)}`);
      return 1;
    }
  }
  console.log(JSON.stringify({ file: input, frames }));
  return 0;
}

export async function main(argv: string[]): Promise<number> {
  const command = argv[0];
  const { values } = parseArgs({
    args: argv.slice(1),
    options: {
      input: { type: "string" },
      output: { type: "string" },
      "min-confidence": { type: "string" },
      detector: { type: "string" },
    },
  });
  switch (command) {
    case "extract-images":
      return cmdExtractImages(values);
    case "validate":
      return cmdValidate(values);
    default:
      console.error("usage: cli.js <extract-images|validate> [options]");
      return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then(
    (code) => process.exit(code),
    (err) => {
      console.error(String(err instanceof Error ? err.message : err));
      process.exit(2);
    }
  );
}
