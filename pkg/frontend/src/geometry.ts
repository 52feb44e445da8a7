/** Affine mapping between normalized data space and plot pixels.
 *
 * Rectangles and points live in normalized coordinates everywhere; pixels
 * exist only at render time, so resizing the plot never moves a drawn
 * rectangle relative to the data.
 */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export interface PlotFrame {
  width: number;
  height: number;
  margin: Margin;
  domainU: [number, number];
  domainV: [number, number];
}

export const DEFAULT_MARGIN: Margin = { top: 12, right: 16, bottom: 34, left: 44 };

/** Frame whose domain covers all task points with a small breathing pad. */
export function frameForPoints(
  points: [number, number, number][],
  width: number,
  height: number,
  margin: Margin = DEFAULT_MARGIN,
): PlotFrame {
  let uLo = Infinity, uHi = -Infinity, vLo = Infinity, vHi = -Infinity;
  for (const [u, v] of points) {
    uLo = Math.min(uLo, u);
    uHi = Math.max(uHi, u);
    vLo = Math.min(vLo, v);
    vHi = Math.max(vHi, v);
  }
  const padU = (uHi - uLo || 1) * 0.06;
  const padV = (vHi - vLo || 1) * 0.06;
  return {
    width,
    height,
    margin,
    domainU: [uLo - padU, uHi + padU],
    domainV: [vLo - padV, vHi + padV],
  };
}

function innerWidth(frame: PlotFrame): number {
  return frame.width - frame.margin.left - frame.margin.right;
}

function innerHeight(frame: PlotFrame): number {
  return frame.height - frame.margin.top - frame.margin.bottom;
}

/** Data -> pixel. The v axis points up in data space, down on screen. */
export function toPixel(frame: PlotFrame, u: number, v: number): { x: number; y: number } {
  const [u0, u1] = frame.domainU;
  const [v0, v1] = frame.domainV;
  return {
    x: frame.margin.left + ((u - u0) / (u1 - u0)) * innerWidth(frame),
    y: frame.margin.top + ((v1 - v) / (v1 - v0)) * innerHeight(frame),
  };
}

/** Pixel -> data; inverse of toPixel. */
export function toNormalized(frame: PlotFrame, x: number, y: number): { u: number; v: number } {
  const [u0, u1] = frame.domainU;
  const [v0, v1] = frame.domainV;
  return {
    u: u0 + ((x - frame.margin.left) / innerWidth(frame)) * (u1 - u0),
    v: v1 - ((y - frame.margin.top) / innerHeight(frame)) * (v1 - v0),
  };
}
