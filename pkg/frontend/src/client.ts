/**
 * Typed client for the gesture-engine HTTP API.
 */

import {
  enrollResponseSchema,
  FrameRecord,
  galleryInfoSchema,
  healthSchema,
  Prediction,
  predictionSchema,
  sessionResponseSchema,
} from "./wire.js";

export class EngineApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string
  ) {
    super(`engine API error ${status}: ${detail}`);
  }
}

export interface ClassifyOptions {
  n?: number;
  threshold?: number;
}

export interface SessionOptions extends ClassifyOptions {
  window?: number;
}

export class EngineClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request(
    method: string,
    path: string,
    body?: unknown
  ): Promise<unknown> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const parsed = (await response.json()) as { detail?: unknown };
        if (parsed.detail !== undefined) detail = JSON.stringify(parsed.detail);
      } catch {
        // keep statusText
      }
      throw new EngineApiError(response.status, detail);
    }
    if (response.status === 204) return undefined;
    return response.json();
  }

  async health() {
    return healthSchema.parse(await this.request("GET", "/health"));
  }

  async galleryInfo() {
    return galleryInfoSchema.parse(await this.request("GET", "/gallery"));
  }

  async enroll(label: string, frame: FrameRecord, meta: Record<string, unknown> = {}) {
    return enrollResponseSchema.parse(
      await this.request("POST", "/gallery/entries", { label, frame, meta })
    );
  }

  async classify(frame: FrameRecord, options: ClassifyOptions = {}): Promise<Prediction> {
    return predictionSchema.parse(
      await this.request("POST", "/classify", { frame, ...options })
    );
  }

  async openSession(options: SessionOptions = {}) {
    return sessionResponseSchema.parse(
      await this.request("POST", "/sessions", options)
    );
  }

  async pushFrame(
    sessionId: string,
    frame: FrameRecord,
    options: ClassifyOptions = {}
  ): Promise<Prediction> {
    return predictionSchema.parse(
      await this.request("POST", `/sessions/${sessionId}/frames`, {
        frame,
        ...options,
      })
    );
  }

  async closeSession(sessionId: string): Promise<void> {
    await this.request("DELETE", `/sessions/${sessionId}`);
  }
}
