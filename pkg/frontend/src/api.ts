// Thin typed client for the synthesis service. One base URL is the only
// configuration; newer requests supersede older ones via AbortController.

import { ServiceRequest, ServiceResponse } from "./types.js";

export interface ApiResult {
  ok: boolean; // 2xx (422 arrives as ok=false with a best-effort body)
  status: number;
  body: ServiceResponse;
}

export class ApiClient {
  constructor(public baseUrl: string) {}

  private async post(path: string, payload: unknown, signal?: AbortSignal): Promise<ApiResult> {
    const resp = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
      signal,
    });
    const body = (await resp.json()) as ServiceResponse;
    if (!resp.ok && resp.status !== 422) {
      const detail = (body as any)?.error;
      const message = typeof detail === "object" && detail ? `${detail.field}: ${detail.message}` : `HTTP ${resp.status}`;
      throw new Error(message);
    }
    return { ok: resp.ok, status: resp.status, body };
  }

  synthesize(request: ServiceRequest, signal?: AbortSignal): Promise<ApiResult> {
    return this.post("/api/synthesize", request, signal);
  }

  induce(request: ServiceRequest, signal?: AbortSignal): Promise<ApiResult> {
    return this.post("/api/induce", request, signal);
  }

  applyProgram(programText: string, inputs: string[], signal?: AbortSignal): Promise<ApiResult> {
    return this.post("/api/apply", { program_text: programText, inputs }, signal);
  }

  async health(): Promise<{ status: string; model: string }> {
    const resp = await fetch(this.baseUrl + "/api/health");
    return (await resp.json()) as { status: string; model: string };
  }
}
