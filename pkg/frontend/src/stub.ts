/**
 * Deterministic stand-in detector for tests and offline tooling.
 *
 * Real pose models need their wasm + weight assets at runtime (see
 * mediapipe.ts); this stub instead fabricates label-coherent hands:
 * images of the same class map to nearby landmark sets while classes
 * stay far apart, and every derived value is a pure function of the
 * image id, so extraction output is reproducible bit for bit.
 */

import { DetectedHand, LandmarkDetector } from "./extractor.js";

export interface StubImage {
  id: string;
  /** Empty images (size 0) are treated as having no detectable hand. */
  size?: number;
  label?: string;
}

// Anchor targets shared with the engine's canonical frame; keeping the
// stub's anchors here guarantees solvable, well-conditioned geometry.
const ANCHORS: Record<number, [number, number, number]> = {
  0: [0.5, 0.75, 0],
  1: [0.42, 0.7, -0.03],
  5: [0.4, 0.45, -0.01],
  17: [0.6, 0.5, -0.02],
};

export function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function basePoints(label: string): [number, number, number][] {
  const rand = mulberry32(fnv1a(`label:${label}`));
  const points: [number, number, number][] = [];
  for (let i = 0; i < 21; i++) {
    const anchor = ANCHORS[i];
    if (anchor) {
      points.push([...anchor]);
    } else {
      points.push([rand(), rand(), rand() * 0.2 - 0.1]);
    }
  }
  return points;
}

function jitter(
  points: [number, number, number][],
  rand: () => number,
  noise: number
): [number, number, number][] {
  // small per-image perturbation plus a rigid-ish 2D view change; both
  // are undone by the engine's normalization
  const angle = (rand() - 0.5) * Math.PI;
  const scale = 0.6 + rand() * 0.8;
  const dx = (rand() - 0.5) * 0.4;
  const dy = (rand() - 0.5) * 0.4;
  const cos = Math.cos(angle) * scale;
  const sin = Math.sin(angle) * scale;
  return points.map(([x, y, z], i) => {
    const nx = ANCHORS[i] ? 0 : (rand() - 0.5) * 2 * noise;
    const ny = ANCHORS[i] ? 0 : (rand() - 0.5) * 2 * noise;
    const px = x + nx;
    const py = y + ny;
    return [
      cos * px - sin * py + dx,
      sin * px + cos * py + dy,
      z * scale,
    ];
  });
}

export interface StubOptions {
  noise?: number;
  /** Images whose id satisfies this never contain a hand. */
  missWhen?: (id: string) => boolean;
}

export class StubDetector implements LandmarkDetector<StubImage> {
  readonly model = "stub-hash-detector";
  readonly version = "1";
  private readonly noise: number;
  private readonly missWhen: (id: string) => boolean;

  constructor(options: StubOptions = {}) {
    this.noise = options.noise ?? 0.005;
    this.missWhen = options.missWhen ?? (() => false);
  }

  async detect(image: StubImage): Promise<DetectedHand[]> {
    if (image.size === 0 || this.missWhen(image.id)) return [];
    const label = image.label ?? image.id.split("/")[0] ?? "unlabeled";
    const rand = mulberry32(fnv1a(`image:${image.id}`));
    const landmarks = jitter(basePoints(label), rand, this.noise);
    return [
      {
        landmarks,
        handedness: rand() < 0.5 ? "Left" : "Right",
        confidence: 0.55 + rand() * 0.45,
      },
    ];
  }
}
