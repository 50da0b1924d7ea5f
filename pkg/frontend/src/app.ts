/**
 * Browser app: captures hands from the webcam, uploaded videos, or image
 * folders with the MediaPipe detector and talks to the gesture engine.
 *
 * Live mode streams webcam frames into an engine session and shows the
 * smoothed label; record mode accumulates frame/manifest JSONL for
 * download so datasets can be extracted entirely client-side.
 */

import { EngineClient } from "./client.js";
import {
  extractFrameSequence,
  extractImages,
  LabeledImage,
  provenanceHeader,
  sampleTimestamps,
  toJsonl,
} from "./extractor.js";
import { DetectableImage, MediapipeDetector } from "./mediapipe.js";
import { FrameRecord, toJsonLine } from "./wire.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function download(name: string, text: string): void {
  const url = URL.createObjectURL(new Blob([text], { type: "application/jsonl" }));
  const a = document.createElement("a");
  a.href = url;
  a.download = name;
  a.click();
  URL.revokeObjectURL(url);
}

async function* videoFrames(video: HTMLVideoElement, fps: number) {
  for (const timestampMs of sampleTimestamps(video.duration * 1000, fps)) {
    video.currentTime = timestampMs / 1000;
    await new Promise<void>((resolve) =>
      video.addEventListener("seeked", () => resolve(), { once: true })
    );
    yield { timestampMs, image: video as DetectableImage };
  }
}

export async function start(): Promise<void> {
  const status = el<HTMLDivElement>("status");
  const label = el<HTMLDivElement>("label");
  const video = el<HTMLVideoElement>("camera");
  const serverInput = el<HTMLInputElement>("server");
  const classInput = el<HTMLInputElement>("classname");

  status.textContent = "loading hand model...";
  const detector = await MediapipeDetector.create({ numHands: 1 });
  status.textContent = "model ready";

  const client = () => new EngineClient(serverInput.value);
  let capturing = false;
  const recorded: string[] = [];

  el<HTMLButtonElement>("start-camera").onclick = async () => {
    const stream = await navigator.mediaDevices.getUserMedia({ video: true });
    video.srcObject = stream;
    await video.play();
    status.textContent = "camera running";
  };

  el<HTMLButtonElement>("enroll").onclick = async () => {
    const hands = await detector.detectVideo(video, performance.now());
    if (hands.length === 0) {
      status.textContent = "no hand found";
      return;
    }
    const frame: FrameRecord = {
      source_id: `webcam-${Date.now()}`,
      landmarks: hands[0].landmarks,
      handedness: hands[0].handedness,
    };
    const result = await client().enroll(classInput.value || "unlabeled", frame);
    status.textContent = `enrolled entry ${result.id} as ${result.label}`;
  };

  el<HTMLButtonElement>("live").onclick = async () => {
    if (capturing) {
      capturing = false;
      return;
    }
    capturing = true;
    const session = await client().openSession({ window: 10, n: 1 });
    status.textContent = `session ${session.session_id.slice(0, 8)} open`;
    const loop = async () => {
      if (!capturing) {
        await client().closeSession(session.session_id);
        status.textContent = "session closed";
        return;
      }
      const timestampMs = performance.now();
      const hands = await detector.detectVideo(video, timestampMs);
      if (hands.length > 0) {
        const frame: FrameRecord = {
          source_id: `webcam-${Math.round(timestampMs)}`,
          landmarks: hands[0].landmarks,
          handedness: hands[0].handedness,
          timestamp_ms: timestampMs,
        };
        recorded.push(toJsonLine(frame));
        const prediction = await client().pushFrame(session.session_id, frame);
        label.textContent = prediction.label ?? "…";
      }
      setTimeout(loop, 100); // ~10 fps keeps the session window meaningful
    };
    void loop();
  };

  el<HTMLButtonElement>("download-frames").onclick = () => {
    download("frames.jsonl", recorded.join(""));
  };

  el<HTMLInputElement>("video-file").onchange = async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file) return;
    const clip = document.createElement("video");
    clip.src = URL.createObjectURL(file);
    await new Promise<void>((resolve) =>
      clip.addEventListener("loadedmetadata", () => resolve(), { once: true })
    );
    status.textContent = `extracting ${file.name} at 5 fps...`;
    const { records, summary } = await extractFrameSequence(
      { model: detector.model, version: detector.version, detect: (i) => detector.detect(i) },
      videoFrames(clip, 5),
      { sourcePrefix: file.name }
    );
    download(`${file.name}.jsonl`, toJsonl(records));
    status.textContent = `video frames: ${summary.extracted} extracted, ${summary.rejected.length} without hands`;
  };

  el<HTMLInputElement>("dataset-dir").onchange = async (event) => {
    const files = Array.from((event.target as HTMLInputElement).files ?? []);
    if (files.length === 0) return;
    status.textContent = `extracting ${files.length} images...`;
    const images: LabeledImage<DetectableImage>[] = [];
    for (const file of files) {
      // webkitRelativePath = dataset/<class>/<image>
      const parts = file.webkitRelativePath.split("/");
      const classLabel = parts.length >= 3 ? parts[parts.length - 2] : "unlabeled";
      images.push({
        id: parts.slice(-2).join("/"),
        label: classLabel,
        image: await createImageBitmap(file),
      });
    }
    const minConfidence = 0.5;
    const { records, summary } = await extractImages(detector, images, {
      minConfidence,
      hands: "best",
    });
    download("manifest.jsonl", toJsonl(records, provenanceHeader(detector, minConfidence)));
    status.textContent = `dataset: ${summary.extracted} extracted, ${summary.rejected.length} rejected`;
  };
}

if (typeof document !== "undefined") {
  window.addEventListener("DOMContentLoaded", () => {
    void start().catch((err) => {
      const status = document.getElementById("status");
      if (status) status.textContent = String(err);
    });
  });
}
