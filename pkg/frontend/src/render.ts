/** SVG rendering: scatterplot, drawn rectangles, axes, progress bar. */

import { PlotFrame, toPixel } from "./geometry.js";
import { RectangleData, ScoreResponse } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
export const CLASS_COLORS: Record<0 | 1, string> = { 0: "#d95f02", 1: "#1b6ca8" };

function svgEl<K extends keyof SVGElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = doc.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function clear(group: Element): void {
  while (group.firstChild) {
    group.removeChild(group.firstChild);
  }
}

export function renderPoints(
  layer: SVGGElement,
  frame: PlotFrame,
  points: [number, number, number][],
): void {
  const doc = layer.ownerDocument;
  clear(layer);
  for (const [u, v, label] of points) {
    const { x, y } = toPixel(frame, u, v);
    const dot = svgEl(doc, "circle", {
      cx: x,
      cy: y,
      r: 3.5,
      fill: CLASS_COLORS[label as 0 | 1],
      "fill-opacity": 0.75,
    });
    dot.classList.add("point", `point-label-${label}`);
    layer.appendChild(dot);
  }
}

export function renderRectangles(
  layer: SVGGElement,
  frame: PlotFrame,
  rectangles: readonly RectangleData[],
): void {
  const doc = layer.ownerDocument;
  clear(layer);
  rectangles.forEach((rect, index) => {
    const a = toPixel(frame, rect.uMin, rect.vMax); // top-left on screen
    const b = toPixel(frame, rect.uMax, rect.vMin);
    const box = svgEl(doc, "rect", {
      x: a.x,
      y: a.y,
      width: b.x - a.x,
      height: b.y - a.y,
      fill: CLASS_COLORS[rect.label],
      "fill-opacity": 0.14,
      stroke: CLASS_COLORS[rect.label],
      "stroke-width": 2,
    });
    box.classList.add("drawn-rect");
    box.dataset.index = String(index);
    layer.appendChild(box);
    const tag = svgEl(doc, "text", {
      x: a.x + 4,
      y: a.y + 14,
      fill: CLASS_COLORS[rect.label],
      "font-size": 11,
    });
    tag.textContent = `#${index + 1} -> ${rect.label}`;
    layer.appendChild(tag);
  });
}

export function renderAxes(
  layer: SVGGElement,
  frame: PlotFrame,
  nameU: string,
  nameV: string,
): void {
  const doc = layer.ownerDocument;
  clear(layer);
  const x0 = frame.margin.left;
  const x1 = frame.width - frame.margin.right;
  const y0 = frame.margin.top;
  const y1 = frame.height - frame.margin.bottom;
  layer.appendChild(svgEl(doc, "line",
    { x1: x0, y1: y1, x2: x1, y2: y1, stroke: "#555" }));
  layer.appendChild(svgEl(doc, "line",
    { x1: x0, y1: y0, x2: x0, y2: y1, stroke: "#555" }));

  const ticks = 4;
  for (let i = 0; i <= ticks; i++) {
    const u = frame.domainU[0] + ((frame.domainU[1] - frame.domainU[0]) * i) / ticks;
    const v = frame.domainV[0] + ((frame.domainV[1] - frame.domainV[0]) * i) / ticks;
    const px = toPixel(frame, u, frame.domainV[0]);
    const py = toPixel(frame, frame.domainU[0], v);
    const xt = svgEl(doc, "text",
      { x: px.x, y: y1 + 14, "font-size": 10, "text-anchor": "middle", fill: "#444" });
    xt.textContent = u.toFixed(1);
    layer.appendChild(xt);
    const yt = svgEl(doc, "text",
      { x: x0 - 6, y: py.y + 3, "font-size": 10, "text-anchor": "end", fill: "#444" });
    yt.textContent = v.toFixed(1);
    layer.appendChild(yt);
  }

  const xLabel = svgEl(doc, "text", {
    x: (x0 + x1) / 2, y: frame.height - 6,
    "font-size": 12, "text-anchor": "middle", fill: "#222",
  });
  xLabel.classList.add("axis-name-u");
  xLabel.textContent = nameU;
  layer.appendChild(xLabel);

  const yLabel = svgEl(doc, "text", {
    x: 12, y: (y0 + y1) / 2,
    "font-size": 12, "text-anchor": "middle", fill: "#222",
    transform: `rotate(-90 12 ${(y0 + y1) / 2})`,
  });
  yLabel.classList.add("axis-name-v");
  yLabel.textContent = nameV;
  layer.appendChild(yLabel);
}

export function renderLegend(container: HTMLElement, labels: (0 | 1)[]): void {
  container.textContent = "";
  const doc = container.ownerDocument;
  for (const label of labels) {
    const entry = doc.createElement("span");
    entry.className = "legend-entry";
    const swatch = doc.createElement("span");
    swatch.className = "legend-swatch";
    swatch.style.backgroundColor = CLASS_COLORS[label];
    const text = doc.createElement("span");
    text.textContent = `class ${label}`;
    entry.append(swatch, text);
    container.appendChild(entry);
  }
}

/** The progress readout shows the server's number and nothing else. */
export function renderProgress(
  fill: HTMLElement,
  text: HTMLElement,
  score: ScoreResponse | null,
  threshold: number,
): void {
  if (score === null || score.no_coverage || score.validation_accuracy === null) {
    fill.style.width = "0%";
    fill.classList.remove("above-gate");
    text.textContent = "no coverage yet";
    return;
  }
  const pct = score.validation_accuracy * 100;
  fill.style.width = `${pct}%`;
  fill.classList.toggle("above-gate", score.validation_accuracy > threshold);
  text.textContent =
    `${pct.toFixed(1)}% on validation ` +
    `(covers ${(score.covered_fraction * 100).toFixed(0)}%)`;
}
