/** Drawn-rectangle list: the client-side model behind the canvas.
 *
 * Array position is draw order (creation order); deleting renumbers by
 * construction. Every rectangle kept here satisfies uMin < uMax and
 * vMin < vMax, so anything sent to the server is well formed.
 */

import { RectangleData, RectangleWire, toWire } from "./types.js";

export interface DragBox {
  u0: number;
  v0: number;
  u1: number;
  v1: number;
}

export class RectangleSet {
  private items: RectangleData[] = [];

  /** Normalize drag corners; returns false for degenerate (zero-area) drags. */
  add(drag: DragBox, label: 0 | 1): boolean {
    const uMin = Math.min(drag.u0, drag.u1);
    const uMax = Math.max(drag.u0, drag.u1);
    const vMin = Math.min(drag.v0, drag.v1);
    const vMax = Math.max(drag.v0, drag.v1);
    if (!(uMin < uMax) || !(vMin < vMax)) {
      return false;
    }
    this.items.push({ uMin, uMax, vMin, vMax, label });
    return true;
  }

  delete(index: number): void {
    if (index < 0 || index >= this.items.length) {
      return;
    }
    this.items.splice(index, 1);
  }

  toggleLabel(index: number): void {
    const rect = this.items[index];
    if (rect) {
      rect.label = rect.label === 1 ? 0 : 1;
    }
  }

  get length(): number {
    return this.items.length;
  }

  list(): readonly RectangleData[] {
    return this.items;
  }

  wire(): RectangleWire[] {
    return this.items.map(toWire);
  }
}
