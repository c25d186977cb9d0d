// Fetch wrappers for the causal-forge service. Only the latest explain
// request may be in flight: newer ones abort the previous.

import type { ExplanationDocument, InterventionEntry, ModelSummary } from "./types.js";

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    return new ApiError(
      body.code ?? "error",
      body.message ?? response.statusText,
      response.status
    );
  } catch {
    return new ApiError("error", response.statusText, response.status);
  }
}

export class ApiClient {
  private inflightExplain: AbortController | null = null;

  constructor(private baseUrl: string = "") {}

  async getModel(): Promise<ModelSummary> {
    const response = await fetch(`${this.baseUrl}/model`);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as ModelSummary;
  }

  async evaluate(
    input: Record<string, string>,
    interventions: InterventionEntry[]
  ): Promise<Record<string, string>> {
    const response = await fetch(`${this.baseUrl}/evaluate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ input, interventions }),
    });
    if (!response.ok) throw await parseError(response);
    const body = (await response.json()) as { values: Record<string, string> };
    return body.values;
  }

  async explain(request: {
    input: Record<string, string>;
    interventions: InterventionEntry[];
    policy: string;
  }): Promise<ExplanationDocument> {
    this.inflightExplain?.abort();
    const controller = new AbortController();
    this.inflightExplain = controller;
    try {
      const response = await fetch(`${this.baseUrl}/explain`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(request),
        signal: controller.signal,
      });
      if (!response.ok) throw await parseError(response);
      return (await response.json()) as ExplanationDocument;
    } finally {
      if (this.inflightExplain === controller) this.inflightExplain = null;
    }
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}
