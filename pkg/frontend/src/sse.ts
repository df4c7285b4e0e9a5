// Reconnecting subscription to a session's event stream. The service replays
// every prior event on each subscription, so reconnects are lossless as long
// as the consumer deduplicates (the state reducer upserts by step).

import { StatusPayload, StepRecord, StreamEvent } from "./types.js";

export interface EventSourceLike {
  addEventListener(type: string, handler: (ev: MessageEvent) => void): void;
  close(): void;
  onerror: ((ev: unknown) => void) | null;
  onopen: ((ev: unknown) => void) | null;
}

export type EventSourceFactory = (url: string) => EventSourceLike;

export interface Subscription {
  close(): void;
}

export interface SubscribeOptions {
  makeSource?: EventSourceFactory;
  initialBackoffMs?: number;
  maxBackoffMs?: number;
  schedule?: (fn: () => void, ms: number) => unknown;
}

export function subscribeSession(
  baseUrl: string,
  sessionId: string,
  onEvent: (event: StreamEvent) => void,
  options: SubscribeOptions = {},
): Subscription {
  const makeSource =
    options.makeSource ?? ((url: string) => new EventSource(url) as unknown as EventSourceLike);
  const schedule = options.schedule ?? ((fn, ms) => setTimeout(fn, ms));
  let backoff = options.initialBackoffMs ?? 1000;
  const maxBackoff = options.maxBackoffMs ?? 15000;
  let source: EventSourceLike | null = null;
  let closed = false;
  let sawTerminal = false;

  const connect = () => {
    if (closed || sawTerminal) return;
    source = makeSource(`${baseUrl}/sessions/${sessionId}/events`);
    source.onopen = () => {
      backoff = options.initialBackoffMs ?? 1000;
      onEvent({ kind: "connection", live: true });
    };
    source.addEventListener("record", (ev) => {
      const data = JSON.parse(ev.data) as StepRecord;
      onEvent({ kind: "record", seq: Number((ev as MessageEvent & { lastEventId: string }).lastEventId ?? -1), data });
    });
    source.addEventListener("status", (ev) => {
      const data = JSON.parse(ev.data) as StatusPayload;
      if (data.status === "done_success" || data.status === "done_budget_exhausted" || data.status === "failed") {
        sawTerminal = true;
      }
      onEvent({ kind: "status", seq: Number((ev as MessageEvent & { lastEventId: string }).lastEventId ?? -1), data });
    });
    source.onerror = () => {
      source?.close();
      source = null;
      onEvent({ kind: "connection", live: false });
      if (closed || sawTerminal) return;
      schedule(connect, backoff);
      backoff = Math.min(backoff * 2, maxBackoff);
    };
  };

  connect();
  return {
    close() {
      closed = true;
      source?.close();
    },
  };
}
