export type Status =
  | "connecting"
  | "running"
  | "paused"
  | "done_success"
  | "done_budget_exhausted"
  | "failed";

export interface StepRecord {
  step: number;
  params: Record<string, unknown>;
  image_ref: string;
  reasoning: string;
  plan: string;
  assessment: { kind: string; [k: string]: unknown };
  wall_time_ms: number;
}

export interface StatusPayload {
  status: Exclude<Status, "connecting">;
  reason?: string;
  final_params?: Record<string, unknown>;
}

export type StreamEvent =
  | { kind: "record"; seq: number; data: StepRecord }
  | { kind: "status"; seq: number; data: StatusPayload }
  | { kind: "connection"; live: boolean };

export type UiEvent = StreamEvent | { kind: "select"; step: number };

export type ControlKind = "pause" | "resume" | "abort" | "override_params" | "amend_goal";

export interface ControlCommand {
  kind: ControlKind;
  params?: Record<string, unknown>;
  goal?: string;
}

export const TERMINAL_STATUSES: readonly Status[] = [
  "done_success",
  "done_budget_exhausted",
  "failed",
];
