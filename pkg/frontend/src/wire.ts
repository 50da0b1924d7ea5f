/**
 * Wire formats shared with the gesture engine: landmark frame records,
 * manifest lines, and the HTTP API payloads.  These schemas must stay
 * bit-for-bit compatible with the engine's JSONL parsers; the
 * cross-component tests feed generated files straight into the engine
 * CLI to enforce that.
 */

import { z } from "zod";

export const HANDEDNESS = ["Left", "Right", "Unknown"] as const;
export type Handedness = (typeof HANDEDNESS)[number];

const point = z.tuple([z.number(), z.number(), z.number()]);

export const landmarksSchema = z
  .array(z.array(z.number()).length(3))
  .length(21)
  .refine((pts) => pts.every((p) => p.every((v) => Number.isFinite(v))), {
    message: "landmark coordinates must be finite",
  });

export const frameRecordSchema = z.object({
  source_id: z.string().default(""),
  landmarks: landmarksSchema,
  handedness: z.enum(HANDEDNESS).default("Unknown"),
  timestamp_ms: z.number().optional(),
  label: z.string().min(1).optional(),
});
export type FrameRecord = z.infer<typeof frameRecordSchema>;

export const manifestHeaderSchema = z.object({
  format: z.literal("gesture-manifest"),
  version: z.literal(1),
  model: z.string().optional(),
  model_version: z.string().optional(),
  coordinates: z.literal("image-relative").optional(),
  min_confidence: z.number().optional(),
});
export type ManifestHeader = z.infer<typeof manifestHeaderSchema>;

/** Manifest body line: a labeled frame record (inline landmarks form). */
export const manifestRecordSchema = frameRecordSchema.extend({
  source_id: z.string().min(1),
  label: z.string().min(1),
});
export type ManifestRecord = z.infer<typeof manifestRecordSchema>;

export const rankedMatchSchema = z.object({
  label: z.string(),
  distance: z.number(),
});

export const predictionSchema = z.object({
  source_id: z.string(),
  outcome: z.enum(["match", "no_match"]),
  label: z.string().nullable(),
  ranked: z.array(rankedMatchSchema),
  rejected_reason: z.string().nullish(),
});
export type Prediction = z.infer<typeof predictionSchema>;

export const healthSchema = z.object({
  status: z.string(),
  gallery_size: z.number().int(),
  dim: z.number().int(),
});

export const galleryInfoSchema = z.object({
  dim: z.number().int(),
  size: z.number().int(),
  labels: z.record(z.string(), z.number().int()),
});

export const enrollResponseSchema = z.object({
  id: z.number().int(),
  label: z.string(),
});

export const sessionResponseSchema = z.object({
  session_id: z.string(),
  window: z.number().int(),
  n: z.number().int(),
});

export function toJsonLine(value: unknown): string {
  return JSON.stringify(value) + "\n";
}

/** Parse one manifest/frame JSONL line; header lines return null. */
export function parseRecordLine(
  line: string,
  lineno: number
): FrameRecord | null {
  let value: unknown;
  try {
    value = JSON.parse(line);
  } catch (err) {
    throw new Error(`line ${lineno}: invalid JSON`);
  }
  if (
    lineno === 1 &&
    typeof value === "object" &&
    value !== null &&
    "format" in value &&
    !("landmarks" in value)
  ) {
    manifestHeaderSchema.parse(value);
    return null;
  }
  const result = frameRecordSchema.safeParse(value);
  if (!result.success) {
    throw new Error(`line ${lineno}: ${result.error.issues[0]?.message}`);
  }
  return result.data;
}

export type { point as LandmarkPoint };
