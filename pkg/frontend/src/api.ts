/** HTTP client for the session server. One setting: the server URL. */

import type {
  ActionResult,
  ApiErrorBody,
  Catalog,
  GameEvent,
  PlayerView,
  SessionCreated,
  WireAction,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parse<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    const err = body as ApiErrorBody;
    throw new ApiError(
      response.status,
      err.error?.code ?? "unknown",
      err.error?.message ?? response.statusText,
    );
  }
  return body as T;
}

export class ApiClient {
  constructor(
    public serverUrl: string,
    public seatToken: string | null = null,
  ) {}

  private headers(): Record<string, string> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.seatToken) headers["X-Seat-Token"] = this.seatToken;
    return headers;
  }

  async createSession(body: {
    seats: Partial<Record<"red" | "blue", string>>;
    seed?: number;
    config?: Record<string, unknown>;
  }): Promise<SessionCreated> {
    const response = await fetch(`${this.serverUrl}/sessions`, {
      method: "POST",
      headers: this.headers(),
      body: JSON.stringify(body),
    });
    return parse<SessionCreated>(response);
  }

  async catalog(sessionId: string): Promise<Catalog> {
    const response = await fetch(`${this.serverUrl}/sessions/${sessionId}/catalog`);
    return parse<Catalog>(response);
  }

  async view(sessionId: string): Promise<PlayerView> {
    const response = await fetch(`${this.serverUrl}/sessions/${sessionId}/view`, {
      headers: this.headers(),
    });
    return parse<PlayerView>(response);
  }

  async submit(sessionId: string, action: WireAction): Promise<ActionResult> {
    const response = await fetch(`${this.serverUrl}/sessions/${sessionId}/actions`, {
      method: "POST",
      headers: this.headers(),
      body: JSON.stringify(action),
    });
    return parse<ActionResult>(response);
  }

  /** Long-poll for events after `since`; resolves early when something lands. */
  async events(sessionId: string, since: number, wait = 20): Promise<GameEvent[]> {
    const url = `${this.serverUrl}/sessions/${sessionId}/events?since=${since}&wait=${wait}`;
    const response = await fetch(url, { headers: this.headers() });
    const body = await parse<{ events: GameEvent[] }>(response);
    return body.events;
  }
}
