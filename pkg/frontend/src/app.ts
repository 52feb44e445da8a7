/** Wires the task, canvas gestures, live scoring, and the submit flow. */

import { frameForPoints, PlotFrame, toNormalized } from "./geometry.js";
import {
  renderAxes,
  renderLegend,
  renderPoints,
  renderProgress,
  renderRectangles,
} from "./render.js";
import { ScoreScheduler } from "./scheduler.js";
import { RectangleSet } from "./state.js";
import {
  RectangleWire,
  ScoreResponse,
  SubmitResponse,
  TaskDescriptor,
} from "./types.js";

export interface ServiceApi {
  fetchTask(): Promise<TaskDescriptor>;
  scoreRectangles(sessionId: string, rects: RectangleWire[]): Promise<ScoreResponse>;
  submitModel(sessionId: string, rects: RectangleWire[]): Promise<SubmitResponse>;
}

const MIN_DRAG_PX = 2;

interface Elements {
  svg: SVGSVGElement;
  pointsLayer: SVGGElement;
  rectsLayer: SVGGElement;
  axesLayer: SVGGElement;
  preview: SVGRectElement;
  legend: HTMLElement;
  datasetName: HTMLElement;
  progressFill: HTMLElement;
  progressGate: HTMLElement;
  progressText: HTMLElement;
  staleBadge: HTMLElement;
  rectList: HTMLElement;
  submitButton: HTMLButtonElement;
  resultPanel: HTMLElement;
  completionCode: HTMLElement;
  copyButton: HTMLButtonElement;
  message: HTMLElement;
}

function grab(doc: Document): Elements {
  const byId = <T extends Element>(id: string) => doc.getElementById(id) as unknown as T;
  return {
    svg: byId<SVGSVGElement>("plot"),
    pointsLayer: byId<SVGGElement>("points-layer"),
    rectsLayer: byId<SVGGElement>("rects-layer"),
    axesLayer: byId<SVGGElement>("axes-layer"),
    preview: byId<SVGRectElement>("draw-preview"),
    legend: byId<HTMLElement>("legend"),
    datasetName: byId<HTMLElement>("dataset-name"),
    progressFill: byId<HTMLElement>("progress-fill"),
    progressGate: byId<HTMLElement>("progress-gate"),
    progressText: byId<HTMLElement>("progress-text"),
    staleBadge: byId<HTMLElement>("stale-badge"),
    rectList: byId<HTMLElement>("rect-list"),
    submitButton: byId<HTMLButtonElement>("submit"),
    resultPanel: byId<HTMLElement>("result-panel"),
    completionCode: byId<HTMLElement>("completion-code"),
    copyButton: byId<HTMLButtonElement>("copy-code"),
    message: byId<HTMLElement>("message"),
  };
}

export class AnnotationApp {
  readonly rectangles = new RectangleSet();
  frame!: PlotFrame;
  task!: TaskDescriptor;
  lastScore: ScoreResponse | null = null;
  submitted = false;

  private els!: Elements;
  private scheduler!: ScoreScheduler;
  private drag: { x: number; y: number } | null = null;

  constructor(
    private readonly doc: Document,
    private readonly api: ServiceApi,
    private readonly debounceMs = 150,
  ) {}

  async start(): Promise<void> {
    this.els = grab(this.doc);
    this.task = await this.api.fetchTask();
    this.scheduler = new ScoreScheduler(
      (rects) => this.api.scoreRectangles(this.task.session_id, rects),
      {
        onResult: (score) => this.showScore(score),
        onStale: (stale) => {
          this.els.staleBadge.hidden = !stale;
        },
      },
      this.debounceMs,
    );

    const width = Number(this.els.svg.getAttribute("width")) || 640;
    const height = Number(this.els.svg.getAttribute("height")) || 480;
    this.frame = frameForPoints(this.task.points, width, height);

    this.els.datasetName.textContent =
      `${this.task.dataset}: ${this.task.pair.name_a} vs ${this.task.pair.name_b}`;
    this.els.progressGate.style.left = `${this.task.threshold * 100}%`;
    renderAxes(this.els.axesLayer, this.frame,
               this.task.pair.name_a, this.task.pair.name_b);
    renderPoints(this.els.pointsLayer, this.frame, this.task.points);
    renderLegend(this.els.legend, [0, 1]);
    renderProgress(this.els.progressFill, this.els.progressText, null,
                   this.task.threshold);

    this.els.svg.addEventListener("pointerdown", (e) => this.onPointerDown(e));
    this.els.svg.addEventListener("pointermove", (e) => this.onPointerMove(e));
    this.els.svg.addEventListener("pointerup", (e) => this.onPointerUp(e));
    this.els.submitButton.addEventListener("click", () => void this.submit());
    this.els.copyButton.addEventListener("click", () => void this.copyCode());
  }

  activeLabel(): 0 | 1 {
    const checked = this.doc.querySelector<HTMLInputElement>(
      'input[name="label"]:checked',
    );
    return checked && checked.value === "0" ? 0 : 1;
  }

  private pixelOf(e: PointerEvent): { x: number; y: number } {
    const bounds = this.els.svg.getBoundingClientRect();
    return { x: e.clientX - bounds.left, y: e.clientY - bounds.top };
  }

  private onPointerDown(e: PointerEvent): void {
    if (this.submitted) {
      return;
    }
    this.drag = this.pixelOf(e);
  }

  private onPointerMove(e: PointerEvent): void {
    if (!this.drag) {
      return;
    }
    const now = this.pixelOf(e);
    const x = Math.min(this.drag.x, now.x);
    const y = Math.min(this.drag.y, now.y);
    this.els.preview.setAttribute("x", String(x));
    this.els.preview.setAttribute("y", String(y));
    this.els.preview.setAttribute("width", String(Math.abs(now.x - this.drag.x)));
    this.els.preview.setAttribute("height", String(Math.abs(now.y - this.drag.y)));
    this.els.preview.setAttribute("visibility", "visible");
  }

  private onPointerUp(e: PointerEvent): void {
    if (!this.drag) {
      return;
    }
    const start = this.drag;
    const end = this.pixelOf(e);
    this.drag = null;
    this.els.preview.setAttribute("visibility", "hidden");
    if (Math.abs(end.x - start.x) < MIN_DRAG_PX
        || Math.abs(end.y - start.y) < MIN_DRAG_PX) {
      return; // a click, not a box
    }
    const a = toNormalized(this.frame, start.x, start.y);
    const b = toNormalized(this.frame, end.x, end.y);
    const added = this.rectangles.add(
      { u0: a.u, v0: a.v, u1: b.u, v1: b.v },
      this.activeLabel(),
    );
    if (added) {
      this.afterEdit();
    }
  }

  deleteRectangle(index: number): void {
    if (this.submitted) {
      return;
    }
    this.rectangles.delete(index);
    this.afterEdit();
  }

  toggleRectangleLabel(index: number): void {
    if (this.submitted) {
      return;
    }
    this.rectangles.toggleLabel(index);
    this.afterEdit();
  }

  private afterEdit(): void {
    renderRectangles(this.els.rectsLayer, this.frame, this.rectangles.list());
    this.renderRectList();
    this.scheduler.notify(this.rectangles.wire());
  }

  private renderRectList(): void {
    const list = this.els.rectList;
    list.textContent = "";
    this.rectangles.list().forEach((rect, index) => {
      const item = this.doc.createElement("li");
      const text = this.doc.createElement("span");
      text.textContent = `#${index + 1} class ${rect.label}`;
      const toggle = this.doc.createElement("button");
      toggle.textContent = "flip label";
      toggle.className = "toggle-label";
      toggle.addEventListener("click", () => this.toggleRectangleLabel(index));
      const remove = this.doc.createElement("button");
      remove.textContent = "delete";
      remove.className = "delete-rect";
      remove.addEventListener("click", () => this.deleteRectangle(index));
      item.append(text, toggle, remove);
      list.appendChild(item);
    });
  }

  private showScore(score: ScoreResponse): void {
    this.lastScore = score;
    renderProgress(this.els.progressFill, this.els.progressText, score,
                   this.task.threshold);
  }

  async submit(): Promise<void> {
    if (this.submitted || this.rectangles.length === 0) {
      if (this.rectangles.length === 0) {
        this.els.message.textContent = "draw at least one box first";
      }
      return;
    }
    this.els.submitButton.disabled = true;
    let result: SubmitResponse;
    try {
      result = await this.api.submitModel(this.task.session_id,
                                          this.rectangles.wire());
    } catch (err) {
      this.els.message.textContent = `submit failed: ${(err as Error).message}`;
      this.els.submitButton.disabled = false;
      return;
    }
    if (result.accepted && result.completion_code) {
      this.submitted = true;
      this.scheduler.stop();
      this.els.completionCode.textContent = result.completion_code;
      this.els.resultPanel.hidden = false;
      this.els.message.textContent =
        "model accepted; paste the code into the job form";
    } else {
      const acc = result.validation_accuracy;
      const gate = (result.threshold ?? this.task.threshold) * 100;
      this.els.message.textContent = acc === null
        ? `rejected: no validation sample is covered (gate ${gate.toFixed(0)}%)`
        : `rejected: ${(acc * 100).toFixed(1)}% is not above the ` +
          `${gate.toFixed(0)}% gate; keep editing`;
      this.els.submitButton.disabled = false;
    }
  }

  private async copyCode(): Promise<void> {
    const code = this.els.completionCode.textContent ?? "";
    const clipboard = this.doc.defaultView?.navigator?.clipboard;
    if (clipboard && code) {
      await clipboard.writeText(code);
      this.els.message.textContent = "code copied";
    }
  }
}
