/** Mirrors of the core's JSON report documents. */

export type FamilyName =
  | "gaussian"
  | "logit"
  | "poisson"
  | "zt-poisson"
  | "geometric";

export type MeasureKind = "kl-r2" | "mcfadden-r2" | "loglik" | "shifted-loglik";

export type NullMode = "ml" | "plugin";

export interface MeasureBlock {
  kind: MeasureKind;
  has_lower_bound: boolean;
  has_upper_bound_one: boolean;
  v_grand: number;
  v_empty: number;
  is_pseudo: boolean;
  /** Per-player Shapley values, sorted descending. */
  phi: Record<string, number>;
  /** Raw values when rounding clamps were applied, else null. */
  phi_raw: Record<string, number> | null;
  /** Shares of the fitted model's value (sum to 1), null when undefined. */
  imp_fm: Record<string, number> | null;
  /** Absolute shares against the upper bound of 1 (bounded measures only). */
  imp_bm: Record<string, number> | null;
  /** Per-player standard errors, sampled runs only. */
  mc_stderr: Record<string, number> | null;
}

export interface RunConstants {
  loglik_null: number;
  loglik_sat: number;
  null_deviance: number;
  zeta: number | null;
  C: number;
  lr: number;
}

export interface SubsetRecord {
  mask: number;
  players: string[];
  loglik: number;
  deviance: number;
  [measure: string]: number | string[] | number;
}

export interface PartReport {
  family: FamilyName;
  n: number;
  players: string[];
  constants: RunConstants;
  n_fits: number;
  measures: Record<string, MeasureBlock>;
  mc_samples: number | null;
  subsets: SubsetRecord[] | null;
}

export interface ReportDocument {
  config: Record<string, unknown>;
  kind: "single" | "hurdle";
  part: PartReport | null;
  binary: PartReport | null;
  count: PartReport | null;
  n_plus: number | null;
  total_loglik: number | null;
  version: string;
  wall_seconds: number;
  created_at: string;
}

export interface RootogramData {
  counts: number[];
  observed: number[];
  expected: number[];
  sqrt_observed: number[];
  sqrt_expected: number[];
  hanging_bottom: number[];
  n: number;
  model: string;
}

/** One regressor group: a bare column name or a named group of columns. */
export type PlayerSpec = string | { name: string; columns: string[] };

export interface CommonOptions {
  /** Path to the CSV input (header row required). */
  data: string;
  response: string;
  players: PlayerSpec[];
  delimiter?: string;
  workers?: number;
  seed?: number;
  /** Override the CLI executable (default: "glmshapley" on PATH). */
  bin?: string;
}

export interface AnalyzeOptions extends CommonOptions {
  family?: FamilyName;
  hurdle?: boolean;
  measures?: MeasureKind[];
  nullMode?: NullMode;
  mcSamples?: number;
}

export interface RootogramOptions extends CommonOptions {
  family?: FamilyName;
  hurdle?: boolean;
  jMax?: number;
}
