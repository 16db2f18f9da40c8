import type { OptionsPayload, SessionView } from "./types.js";

// Base URL is configurable at build time (bundler define) and at runtime
// (window.ADVISOR_BASE); empty string means same origin.
declare global {
  interface Window {
    ADVISOR_BASE?: string;
  }
}

export function baseUrl(): string {
  return (typeof window !== "undefined" && window.ADVISOR_BASE) || "";
}

export interface LoggedExchange {
  method: string;
  path: string;
  body: unknown;
  status: number;
  response: unknown;
}

// Every service exchange is logged; the UI renders numbers only from these
// responses, and tests assert displayed values against this log.
export const requestLog: LoggedExchange[] = [];

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly field?: string,
  ) {
    super(message);
  }
}

async function exchange<T>(method: string, path: string, body?: unknown): Promise<T> {
  const response = await fetch(`${baseUrl()}${path}`, {
    method,
    headers: body === undefined ? undefined : { "Content-Type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  let payload: unknown = null;
  try {
    payload = await response.json();
  } catch {
    payload = null;
  }
  requestLog.push({
    method,
    path,
    body: body ?? null,
    status: response.status,
    response: payload,
  });
  if (!response.ok) {
    const detail = (payload as { detail?: unknown })?.detail;
    if (detail && typeof detail === "object" && "message" in (detail as object)) {
      const d = detail as { field?: string; message: string };
      throw new ApiError(d.message, response.status, d.field);
    }
    throw new ApiError(
      typeof detail === "string" ? detail : `request failed (${response.status})`,
      response.status,
    );
  }
  return payload as T;
}

export function createSession(params: {
  p: string;
  N: number;
  T: number;
  capital: number;
}): Promise<SessionView> {
  return exchange<SessionView>("POST", "/api/session", params);
}

export function fetchSession(id: string): Promise<SessionView> {
  return exchange<SessionView>("GET", `/api/session/${id}`);
}

export function fetchOptions(id: string): Promise<OptionsPayload> {
  return exchange<OptionsPayload>("GET", `/api/session/${id}/options`);
}

export function postOutcome(
  id: string,
  result: "win" | "lose",
  stake?: number,
): Promise<SessionView> {
  const body = stake === undefined ? { result } : { result, stake };
  return exchange<SessionView>("POST", `/api/session/${id}/outcome`, body);
}
