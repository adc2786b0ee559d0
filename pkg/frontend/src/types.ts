/** Shared wire types mirroring the assessment service's JSON. */

export interface Dims {
  d1: number;
  d2: number;
  d3: number;
}

export interface ProductSpec {
  id: number;
  label: string;
  dims: Dims;
}

export type Rule = "R1" | "R2" | "R3";

export const RULES: readonly Rule[] = ["R1", "R2", "R3"] as const;

export const RULE_DESCRIPTIONS: Record<Rule, string> = {
  R1: "increase the container height (d1)",
  R2: "increase the foot height (d2)",
  R3: "increase the container diameter (d3)",
};

/** The four dissimilarity labels, index = coded value. */
export const DISSIMILARITY_LABELS = [
  "identical",
  "a little different",
  "different",
  "very different",
] as const;

export type StageStatus = "open" | "complete";

export interface SessionState {
  id: string;
  products: ProductSpec[];
  stage_status: Record<"1" | "2" | "3", StageStatus>;
  stage1: { entries: [number, number, number][] };
  stage2: Record<string, number> | null;
  stage3: Record<string, [number, number, number]> | null;
}

export interface CoverageResponse {
  coverage: Record<string, number>;
  under_covered: Record<string, number>;
  complete: boolean;
}

export interface VectorFit {
  a: number;
  b: number;
  c: number;
  r_squared: number;
  f_statistic: number | null;
  dof: [number, number];
  significant_at: Record<string, boolean>;
}

export interface SurfaceCoefficients {
  fixed_d1: number;
  c0: number;
  c_d2: number;
  c_d3: number;
  c_d2sq: number;
  c_d3sq: number;
  c_d2d3: number;
}

export interface AnalysisReport {
  seed: number;
  session_id: string;
  mds: {
    K: number;
    restarts: number;
    stress: number;
    converged: boolean;
    configuration: Record<string, number[]>;
  };
  prefmap: VectorFit;
  prefmap_notes: string[];
  appeal_model: {
    model: { a: number[]; k: number[] };
    diagnostics: {
      objective: number;
      appeal_term: number;
      derivative_term: number;
      appeal_residuals: number[];
    };
  };
  surface: {
    fixed_d1: number;
    coefficients: SurfaceCoefficients;
    d2_range: [number, number];
    d3_range: [number, number];
    iso_levels: number[];
  };
  predictions: Record<string, { appeal: number; predicted: number }>;
}

export const MIN_COMPARISONS = 3;
