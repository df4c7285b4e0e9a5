// Wiring: submit a goal, subscribe to the session stream, render, control.

import { controlSession, createSession } from "./api.js";
import { SessionView, initialView, reduce } from "./state.js";
import { Subscription, subscribeSession } from "./sse.js";
import { renderView } from "./view.js";
import { UiEvent } from "./types.js";

const baseUrl = "";
let view: SessionView | null = null;
let subscription: Subscription | null = null;

function dispatch(event: UiEvent): void {
  if (!view) return;
  view = reduce(view, event);
  render();
}

function render(): void {
  const root = document.body;
  if (view) renderView(root, baseUrl, view, handlers);
}

const handlers = {
  onSelect(step: number) {
    dispatch({ kind: "select", step });
  },
  async onControl(kind: "pause" | "resume" | "abort") {
    if (!view) return;
    try {
      await controlSession(baseUrl, view.sessionId, { kind });
    } catch (err) {
      reportError(err);
    }
  },
  async onOverride(paramsJson: string) {
    if (!view) return;
    try {
      const params = JSON.parse(paramsJson) as Record<string, unknown>;
      await controlSession(baseUrl, view.sessionId, { kind: "override_params", params });
    } catch (err) {
      reportError(err);
    }
  },
  async onAmend(goal: string) {
    if (!view) return;
    try {
      await controlSession(baseUrl, view.sessionId, { kind: "amend_goal", goal });
    } catch (err) {
      reportError(err);
    }
  },
};

function reportError(err: unknown): void {
  const box = document.querySelector<HTMLElement>("#error-box");
  if (box) {
    box.textContent = err instanceof Error ? err.message : String(err);
    box.hidden = false;
    setTimeout(() => (box.hidden = true), 6000);
  }
}

function attachSession(sessionId: string): void {
  subscription?.close();
  view = initialView(sessionId);
  render();
  subscription = subscribeSession(baseUrl, sessionId, dispatch);
  const idBox = document.querySelector<HTMLElement>("#session-id");
  if (idBox) idBox.textContent = sessionId;
}

async function submitGoal(event: Event): Promise<void> {
  event.preventDefault();
  const goal = (document.querySelector<HTMLInputElement>("#goal-input")?.value ?? "").trim();
  const configText = document.querySelector<HTMLTextAreaElement>("#config-input")?.value ?? "{}";
  const toolText = document.querySelector<HTMLInputElement>("#tool-input")?.value ?? "";
  const perception = document.querySelector<HTMLSelectElement>("#perception-input")?.value || undefined;
  if (!goal) return;
  try {
    const config = JSON.parse(configText) as Record<string, unknown>;
    const tool = toolText.startsWith("http")
      ? { endpoint: toolText }
      : (JSON.parse(toolText) as Record<string, unknown>);
    const id = await createSession(baseUrl, { config, goal, tool, perception });
    attachSession(id);
  } catch (err) {
    reportError(err);
  }
}

function init(): void {
  document.querySelector("#goal-form")?.addEventListener("submit", submitGoal);
  document.querySelector("#btn-pause")?.addEventListener("click", () => handlers.onControl("pause"));
  document.querySelector("#btn-resume")?.addEventListener("click", () => handlers.onControl("resume"));
  document.querySelector("#btn-abort")?.addEventListener("click", () => handlers.onControl("abort"));
  document.querySelector("#btn-override")?.addEventListener("click", () => {
    const params = document.querySelector<HTMLInputElement>("#override-input")?.value ?? "{}";
    handlers.onOverride(params);
  });
  document.querySelector("#btn-amend")?.addEventListener("click", () => {
    const goal = document.querySelector<HTMLInputElement>("#amend-input")?.value ?? "";
    if (goal.trim()) handlers.onAmend(goal.trim());
  });
  const attachInput = document.querySelector<HTMLInputElement>("#attach-input");
  document.querySelector("#btn-attach")?.addEventListener("click", () => {
    const id = attachInput?.value.trim();
    if (id) attachSession(id);
  });
}

if (typeof document !== "undefined") {
  init();
}
