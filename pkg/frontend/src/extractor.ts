/**
 * Detector-agnostic extraction pipeline: turn labeled image collections
 * and frame sequences into the engine's manifest / frame JSONL, with
 * per-file rejection accounting and provenance recorded in the header.
 */

import {
  FrameRecord,
  Handedness,
  ManifestHeader,
  toJsonLine,
} from "./wire.js";

/** One hand found in an image, in image-relative coordinates. */
export interface DetectedHand {
  landmarks: [number, number, number][];
  handedness: Handedness;
  confidence: number;
}

/**
 * Anything that can find hands in an image.  TImage stays opaque so the
 * same pipeline runs in the browser (bitmaps, video elements) and in
 * node (whatever the detector understands).
 */
export interface LandmarkDetector<TImage> {
  readonly model: string;
  readonly version: string;
  detect(image: TImage): Promise<DetectedHand[]>;
}

export interface LabeledImage<TImage> {
  /** Stable identifier, e.g. the path relative to the dataset root. */
  id: string;
  label: string;
  image: TImage;
}

export interface ExtractionOptions {
  minConfidence?: number;
  /** "best" keeps the highest-confidence hand; "all" emits one record per hand. */
  hands?: "best" | "all";
}

export interface Rejection {
  id: string;
  reason: string;
}

export interface ExtractionSummary {
  total: number;
  extracted: number;
  rejected: Rejection[];
  model: string;
  version: string;
}

export function provenanceHeader(
  detector: LandmarkDetector<unknown>,
  minConfidence: number
): ManifestHeader {
  return {
    format: "gesture-manifest",
    version: 1,
    model: detector.model,
    model_version: detector.version,
    coordinates: "image-relative",
    min_confidence: minConfidence,
  };
}

function toRecords(
  id: string,
  label: string | undefined,
  hands: DetectedHand[],
  minConfidence: number,
  mode: "best" | "all",
  timestampMs?: number
): FrameRecord[] {
  const confident = hands.filter((h) => h.confidence >= minConfidence);
  if (confident.length === 0) return [];
  const chosen =
    mode === "best"
      ? [confident.reduce((a, b) => (b.confidence > a.confidence ? b : a))]
      : confident;
  return chosen.map((hand, index) => {
    const record: FrameRecord = {
      source_id: chosen.length > 1 ? `${id}#h${index}` : id,
      landmarks: hand.landmarks,
      handedness: hand.handedness,
    };
    if (label !== undefined) record.label = label;
    if (timestampMs !== undefined) record.timestamp_ms = timestampMs;
    return record;
  });
}

/**
 * Extract a labeled image collection into manifest records.  Detector
 * failures on individual images are recorded as rejections and never
 * abort the batch.
 */
export async function extractImages<TImage>(
  detector: LandmarkDetector<TImage>,
  images: Iterable<LabeledImage<TImage>> | AsyncIterable<LabeledImage<TImage>>,
  options: ExtractionOptions = {}
): Promise<{ records: FrameRecord[]; summary: ExtractionSummary }> {
  const minConfidence = options.minConfidence ?? 0.5;
  const mode = options.hands ?? "best";
  const records: FrameRecord[] = [];
  const rejected: Rejection[] = [];
  let total = 0;
  for await (const item of images as AsyncIterable<LabeledImage<TImage>>) {
    total += 1;
    let hands: DetectedHand[];
    try {
      hands = await detector.detect(item.image);
    } catch (err) {
      rejected.push({ id: item.id, reason: `detector error: ${String(err)}` });
      continue;
    }
    const found = toRecords(item.id, item.label, hands, minConfidence, mode);
    if (found.length === 0) {
      rejected.push({ id: item.id, reason: "no hand detected" });
      continue;
    }
    records.push(...found);
  }
  return {
    records,
    summary: {
      total,
      extracted: records.length,
      rejected,
      model: detector.model,
      version: detector.version,
    },
  };
}

/** Frame sampling instants for a clip: 0, 1000/fps, ... up to durationMs. */
export function sampleTimestamps(durationMs: number, fps: number): number[] {
  if (fps <= 0) throw new Error("fps must be positive");
  if (durationMs < 0) throw new Error("duration must be non-negative");
  const step = 1000 / fps;
  const out: number[] = [];
  for (let t = 0; t <= durationMs; t += step) out.push(t);
  return out;
}

export interface TimedImage<TImage> {
  timestampMs: number;
  image: TImage;
}

/**
 * Extract an ordered frame sequence (video samples, webcam captures).
 * Emits one record per detected hand, timestamped; frames without a
 * confident hand are counted but produce no record.
 */
export async function extractFrameSequence<TImage>(
  detector: LandmarkDetector<TImage>,
  frames: Iterable<TimedImage<TImage>> | AsyncIterable<TimedImage<TImage>>,
  options: ExtractionOptions & { sourcePrefix?: string } = {}
): Promise<{ records: FrameRecord[]; summary: ExtractionSummary }> {
  const minConfidence = options.minConfidence ?? 0.5;
  const mode = options.hands ?? "all";
  const prefix = options.sourcePrefix ?? "frame";
  const records: FrameRecord[] = [];
  const rejected: Rejection[] = [];
  let total = 0;
  for await (const frame of frames as AsyncIterable<TimedImage<TImage>>) {
    const id = `${prefix}-${String(total).padStart(6, "0")}`;
    total += 1;
    let hands: DetectedHand[];
    try {
      hands = await detector.detect(frame.image);
    } catch (err) {
      rejected.push({ id, reason: `detector error: ${String(err)}` });
      continue;
    }
    const found = toRecords(
      id,
      undefined,
      hands,
      minConfidence,
      mode,
      frame.timestampMs
    );
    if (found.length === 0) {
      rejected.push({ id, reason: "no hand detected" });
      continue;
    }
    records.push(...found);
  }
  return {
    records,
    summary: {
      total,
      extracted: records.length,
      rejected,
      model: detector.model,
      version: detector.version,
    },
  };
}

/** Serialize header + records as the manifest / frame JSONL text. */
export function toJsonl(
  records: FrameRecord[],
  header?: ManifestHeader
): string {
  const lines: string[] = [];
  if (header) lines.push(toJsonLine(header));
  for (const record of records) lines.push(toJsonLine(record));
  return lines.join("");
}
