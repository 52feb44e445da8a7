/** Wire types for the annotation service endpoints. */

export interface DimensionPairInfo {
  dim_a: number;
  dim_b: number;
  name_a: string;
  name_b: string;
}

export interface TaskDescriptor {
  session_id: string;
  dataset: string;
  pair: DimensionPairInfo;
  /** Normalized annotation-train rows as [u, v, label] triples. */
  points: [number, number, number][];
  threshold: number;
  min_coverage: number;
}

/** One drawn box in normalized data coordinates; array index is draw order. */
export interface RectangleData {
  uMin: number;
  uMax: number;
  vMin: number;
  vMax: number;
  label: 0 | 1;
}

export interface RectangleWire {
  u_min: number;
  u_max: number;
  v_min: number;
  v_max: number;
  label: 0 | 1;
}

export interface ScoreResponse {
  validation_accuracy: number | null;
  no_coverage: boolean;
  covered_fraction: number;
}

export interface SubmitResponse {
  accepted: boolean;
  validation_accuracy: number | null;
  completion_code?: string;
  model_id?: string;
  covered_fraction?: number;
  threshold?: number;
}

export function toWire(rect: RectangleData): RectangleWire {
  return {
    u_min: rect.uMin,
    u_max: rect.uMax,
    v_min: rect.vMin,
    v_max: rect.vMax,
    label: rect.label,
  };
}
