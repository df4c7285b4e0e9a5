// Pure session-view state: a fold over stream events plus user input, so a
// replayed event stream always reconstructs the identical view.

import { StepRecord, Status, TERMINAL_STATUSES, UiEvent } from "./types.js";

export interface SessionView {
  sessionId: string;
  status: Status;
  steps: StepRecord[]; // ascending by step, no duplicates
  selected: number | null; // selected step number (not index)
  live: boolean; // event stream currently connected
  failureReason: string;
  finalParams: Record<string, unknown> | null;
}

export function initialView(sessionId: string): SessionView {
  return {
    sessionId,
    status: "connecting",
    steps: [],
    selected: null,
    live: false,
    failureReason: "",
    finalParams: null,
  };
}

export function reduce(view: SessionView, event: UiEvent): SessionView {
  switch (event.kind) {
    case "record": {
      // replays after a reconnect re-deliver earlier steps: upsert by step
      const steps = view.steps.filter((s) => s.step !== event.data.step);
      steps.push(event.data);
      steps.sort((a, b) => a.step - b.step);
      const selected = view.selected === null ? event.data.step : view.selected;
      return { ...view, steps, selected };
    }
    case "status": {
      return {
        ...view,
        status: event.data.status,
        failureReason: event.data.reason ?? view.failureReason,
        finalParams: event.data.final_params ?? view.finalParams,
      };
    }
    case "connection":
      return { ...view, live: event.live };
    case "select": {
      const exists = view.steps.some((s) => s.step === event.step);
      return exists ? { ...view, selected: event.step } : view;
    }
  }
}

export function isTerminal(view: SessionView): boolean {
  return TERMINAL_STATUSES.includes(view.status);
}

export interface ControlAffordances {
  pause: boolean;
  resume: boolean;
  abort: boolean;
  override: boolean;
  amend: boolean;
}

// mirrors the service's transition rules so enabled controls never 409
export function affordances(view: SessionView): ControlAffordances {
  const running = view.status === "running";
  const paused = view.status === "paused";
  return {
    pause: running,
    resume: paused,
    abort: running || paused,
    override: paused,
    amend: running || paused,
  };
}

export function selectedStep(view: SessionView): StepRecord | null {
  if (view.selected === null) return null;
  return view.steps.find((s) => s.step === view.selected) ?? null;
}

export function latestStep(view: SessionView): StepRecord | null {
  return view.steps.length ? view.steps[view.steps.length - 1] : null;
}
