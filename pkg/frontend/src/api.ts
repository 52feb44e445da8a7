/** Thin fetch wrappers for the four service endpoints. */

import { RectangleWire, ScoreResponse, SubmitResponse, TaskDescriptor } from "./types.js";

export async function fetchTask(): Promise<TaskDescriptor> {
  const resp = await fetch("/task");
  if (!resp.ok) {
    throw new Error(`task request failed: ${resp.status}`);
  }
  return (await resp.json()) as TaskDescriptor;
}

export async function scoreRectangles(
  sessionId: string,
  rectangles: RectangleWire[],
): Promise<ScoreResponse> {
  const resp = await fetch(`/task/${sessionId}/rectangles`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ rectangles }),
  });
  if (!resp.ok) {
    throw new Error(`scoring failed: ${resp.status}`);
  }
  return (await resp.json()) as ScoreResponse;
}

export async function submitModel(
  sessionId: string,
  rectangles: RectangleWire[],
): Promise<SubmitResponse> {
  const resp = await fetch(`/task/${sessionId}/submit`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ rectangles }),
  });
  if (resp.status === 409) {
    throw new Error("session already submitted");
  }
  if (!resp.ok) {
    throw new Error(`submit failed: ${resp.status}`);
  }
  return (await resp.json()) as SubmitResponse;
}
