// JSON shapes shared with the periodlab HTTP service.  Complex numbers
// travel as {re, im} objects, matrices as row-major nested arrays.

export interface CNum {
  re: number;
  im: number;
}

export interface CyclePoint {
  re: number;
  im: number;
  sheet: number;
}

export interface CycleSpec {
  name: string;
  points: CyclePoint[];
}

// The cycle file format, also what /api/basis-check and friends accept
// inline.  Paths are implicitly closed back to their first vertex.
export interface CycleFile {
  curve: string;
  basepoint: CNum;
  cycles: CycleSpec[];
}

export interface BranchPointInfo {
  point: CNum;
  cycle_type: number[];
  standoff: number;
}

export interface CurvePayload {
  id: string;
  curve: string;
  model: string | null;
  variables: string[];
  sheet_count: number;
  base_point: CNum;
  sheet_labels: CNum[];
  branch_points: BranchPointInfo[];
  includes_infinity: boolean;
  infinity_cycle_type: number[];
}

export interface LiftPayload {
  id: string;
  start_sheet: number;
  sheets: number[];
  closure_sheet: number;
  closes: boolean;
}

export interface IntersectPayload {
  curve: string;
  cycle1: string;
  cycle2: string;
  intersection: number;
}

export interface CycleReport {
  name: string;
  closes: boolean;
  vertex_count: number;
  id: string;
}

export interface BasisCheckPayload {
  id: string;
  curve: string;
  cycles: CycleReport[];
  names: string[];
  matrix: number[][];
  canonical: boolean;
}

export interface TransformPayload {
  curve: string;
  src: string;
  dst: string;
  matrix: number[][];
  symplectic: boolean;
}

export interface DifferentialText {
  numerator: string;
  denominator: string;
}

export interface RiemannReport {
  max_asymmetry: number;
  min_imag_eigenvalue: number;
  pass: boolean;
}

export interface PeriodsPayload {
  curve: string;
  basis: string;
  differentials: DifferentialText[];
  tol: number;
  A_periods: CNum[][];
  B_periods: CNum[][];
  tau: CNum[][];
  condition: number;
  riemann: RiemannReport;
}

export interface KleinReferencePayload {
  tau_theorem: CNum[][];
  targets: Record<string, { tau: CNum[][]; M: number[][] }>;
  symmetries: Record<
    string,
    { M: number[][]; holomorphic: boolean; order: number }
  >;
}
