// REST calls against the session service.

import { ControlCommand } from "./types.js";

export interface CreateSessionRequest {
  config: Record<string, unknown>;
  goal: string;
  tool: Record<string, unknown>;
  perception?: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function parseError(res: Response): Promise<never> {
  let code = "http_error";
  let detail = `status ${res.status}`;
  try {
    const body = (await res.json()) as { error?: { code?: string; detail?: string } };
    code = body.error?.code ?? code;
    detail = body.error?.detail ?? detail;
  } catch {
    // non-JSON error body: keep defaults
  }
  throw new ApiError(res.status, code, detail);
}

export async function createSession(baseUrl: string, request: CreateSessionRequest): Promise<string> {
  const res = await fetch(`${baseUrl}/sessions`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(request),
  });
  if (res.status !== 201) await parseError(res);
  const body = (await res.json()) as { id: string };
  return body.id;
}

export async function controlSession(
  baseUrl: string,
  sessionId: string,
  command: ControlCommand,
): Promise<string> {
  const res = await fetch(`${baseUrl}/sessions/${sessionId}/control`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(command),
  });
  if (!res.ok) await parseError(res);
  const body = (await res.json()) as { status: string };
  return body.status;
}

export async function fetchSession(baseUrl: string, sessionId: string): Promise<Record<string, unknown>> {
  const res = await fetch(`${baseUrl}/sessions/${sessionId}`);
  if (!res.ok) await parseError(res);
  return (await res.json()) as Record<string, unknown>;
}

export function imageUrl(baseUrl: string, imageRef: string): string {
  return `${baseUrl}/images/${imageRef}`;
}
