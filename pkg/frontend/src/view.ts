// DOM rendering: left panel = goal entry + step history, right panel = the
// selected render at full size with its reasoning / plan / assessment.

import { imageUrl } from "./api.js";
import { ControlAffordances, SessionView, affordances, isTerminal, selectedStep } from "./state.js";

export interface ViewHandlers {
  onSelect(step: number): void;
  onControl(kind: "pause" | "resume" | "abort"): void;
  onOverride(paramsJson: string): void;
  onAmend(goal: string): void;
}

const STATUS_LABELS: Record<string, string> = {
  connecting: "connecting…",
  running: "running",
  paused: "paused",
  done_success: "goal reached",
  done_budget_exhausted: "budget exhausted",
  failed: "failed",
};

export function renderView(root: HTMLElement, baseUrl: string, view: SessionView, handlers: ViewHandlers): void {
  const statusBadge = root.querySelector<HTMLElement>("#status-badge");
  if (statusBadge) {
    statusBadge.textContent = STATUS_LABELS[view.status] ?? view.status;
    statusBadge.dataset.status = view.status;
    statusBadge.title = view.failureReason;
  }

  const banner = root.querySelector<HTMLElement>("#reconnect-banner");
  if (banner) banner.hidden = view.live || isTerminal(view);

  renderTimeline(root, baseUrl, view, handlers);
  renderDetail(root, baseUrl, view);
  renderControls(root, affordances(view));
}

function renderTimeline(root: HTMLElement, baseUrl: string, view: SessionView, handlers: ViewHandlers): void {
  const list = root.querySelector<HTMLElement>("#timeline");
  if (!list) return;
  list.replaceChildren();
  for (const step of view.steps) {
    const item = document.createElement("button");
    item.className = "step" + (view.selected === step.step ? " selected" : "");
    item.dataset.step = String(step.step);
    const img = document.createElement("img");
    img.src = imageUrl(baseUrl, step.image_ref);
    img.alt = `step ${step.step}`;
    img.className = "thumb";
    const caption = document.createElement("span");
    caption.textContent = `#${step.step} ${step.assessment.kind}`;
    item.append(img, caption);
    item.addEventListener("click", () => handlers.onSelect(step.step));
    list.append(item);
  }
}

function renderDetail(root: HTMLElement, baseUrl: string, view: SessionView): void {
  const image = root.querySelector<HTMLImageElement>("#detail-image");
  const meta = root.querySelector<HTMLElement>("#detail-meta");
  const step = selectedStep(view);
  if (!image || !meta) return;
  if (!step) {
    image.removeAttribute("src");
    meta.textContent = "waiting for the first render…";
    return;
  }
  image.src = imageUrl(baseUrl, step.image_ref);
  meta.replaceChildren();
  const rows: Array<[string, string]> = [
    ["step", String(step.step)],
    ["params", JSON.stringify(step.params)],
    ["assessment", step.assessment.kind],
    ["reasoning", step.reasoning || "—"],
    ["plan", step.plan || "—"],
  ];
  if (view.finalParams && isTerminal(view)) {
    rows.push(["final params", JSON.stringify(view.finalParams)]);
  }
  for (const [label, value] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.textContent = value;
    meta.append(dt, dd);
  }
}

function renderControls(root: HTMLElement, controls: ControlAffordances): void {
  const set = (id: string, enabled: boolean) => {
    const el = root.querySelector<HTMLButtonElement>(`#${id}`);
    if (el) el.disabled = !enabled;
  };
  set("btn-pause", controls.pause);
  set("btn-resume", controls.resume);
  set("btn-abort", controls.abort);
  set("btn-override", controls.override);
  set("btn-amend", controls.amend);
}
