/**
 * Browser detector backed by the MediaPipe hand-landmarker task.
 *
 * The wasm runtime and the .task model weights load at runtime from the
 * configured URLs (CDN by default), so this adapter is browser-only;
 * node-side tooling uses the stub or a custom detector instead.
 */

import {
  FilesetResolver,
  HandLandmarker,
  type HandLandmarkerResult,
} from "@mediapipe/tasks-vision";

import { DetectedHand, LandmarkDetector } from "./extractor.js";
import { Handedness } from "./wire.js";

const DEFAULT_WASM_BASE =
  "https://cdn.jsdelivr.net/npm/@mediapipe/tasks-vision@latest/wasm";
const DEFAULT_MODEL =
  "https://storage.googleapis.com/mediapipe-models/hand_landmarker/hand_landmarker/float16/1/hand_landmarker.task";

export interface MediapipeOptions {
  wasmBase?: string;
  modelAssetPath?: string;
  numHands?: number;
  minDetectionConfidence?: number;
}

export function toDetectedHands(result: HandLandmarkerResult): DetectedHand[] {
  return result.landmarks.map((landmarks, i) => {
    const category = result.handedness[i]?.[0];
    const name = category?.categoryName;
    const handedness: Handedness =
      name === "Left" || name === "Right" ? name : "Unknown";
    return {
      landmarks: landmarks.map((p) => [p.x, p.y, p.z] as [number, number, number]),
      handedness,
      confidence: category?.score ?? 1.0,
    };
  });
}

export type DetectableImage = Exclude<
  Parameters<HandLandmarker["detect"]>[0],
  undefined
>;

export class MediapipeDetector implements LandmarkDetector<DetectableImage> {
  readonly model = "mediapipe-hand-landmarker";
  readonly version: string;

  private constructor(
    private readonly landmarker: HandLandmarker,
    modelAssetPath: string
  ) {
    this.version = modelAssetPath;
  }

  static async create(options: MediapipeOptions = {}): Promise<MediapipeDetector> {
    const wasm = await FilesetResolver.forVisionTasks(
      options.wasmBase ?? DEFAULT_WASM_BASE
    );
    const modelAssetPath = options.modelAssetPath ?? DEFAULT_MODEL;
    const landmarker = await HandLandmarker.createFromOptions(wasm, {
      baseOptions: { modelAssetPath },
      runningMode: "IMAGE",
      numHands: options.numHands ?? 1,
      minHandDetectionConfidence: options.minDetectionConfidence ?? 0.5,
    });
    return new MediapipeDetector(landmarker, modelAssetPath);
  }

  async detect(image: DetectableImage): Promise<DetectedHand[]> {
    return toDetectedHands(this.landmarker.detect(image));
  }

  /** VIDEO-mode detection; timestamps must increase monotonically. */
  async detectVideo(
    video: HTMLVideoElement,
    timestampMs: number
  ): Promise<DetectedHand[]> {
    return toDetectedHands(this.landmarker.detectForVideo(video, timestampMs));
  }

  close(): void {
    this.landmarker.close();
  }
}
