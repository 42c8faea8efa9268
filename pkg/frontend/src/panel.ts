import type {
  BasisCheckPayload,
  CNum,
  PeriodsPayload,
  RiemannReport,
} from "./types.js";

// View models for the basis and periods panels.  Pure functions so the
// display logic is testable without a DOM.

// fixed-point %+.6f style, the same shape the service's own verification
// report prints, so entries can be compared against published displays
export function formatComplex(z: CNum, digits = 6): string {
  return signedFixed(z.re, digits) + signedFixed(z.im, digits) + "i";
}

function signedFixed(value: number, digits: number): string {
  let s = value.toFixed(digits);
  if (s.startsWith("-") && Number(s) === 0) s = s.slice(1); // -0.000000
  return s.startsWith("-") ? s : "+" + s;
}

// the standard symplectic form: [[0, I], [-I, 0]] in g x g blocks
export function isStandardJ(matrix: number[][]): boolean {
  const n = matrix.length;
  if (n === 0 || n % 2 !== 0) return false;
  const g = n / 2;
  for (let i = 0; i < n; i++) {
    const row = matrix[i];
    if (!Array.isArray(row) || row.length !== n) return false;
    for (let j = 0; j < n; j++) {
      const want = j === i + g ? 1 : j === i - g ? -1 : 0;
      if (row[j] !== want) return false;
    }
  }
  return true;
}

export interface BasisPanelModel {
  names: string[];
  matrix: number[][];
  canonical: boolean;
  isStandardJ: boolean;
  badge: string;
  cycleNotes: string[];
}

export function basisPanelModel(check: BasisCheckPayload): BasisPanelModel {
  const j = isStandardJ(check.matrix);
  let badge: string;
  if (check.canonical && j) {
    badge = "canonical basis (intersection matrix is J)";
  } else if (check.canonical) {
    badge = "canonical basis";
  } else if (check.names.length === 1) {
    badge = "single cycle";
  } else {
    badge = "not canonical";
  }
  return {
    names: check.names,
    matrix: check.matrix,
    canonical: check.canonical,
    isStandardJ: j,
    badge,
    cycleNotes: check.cycles.map(
      (c) =>
        `${c.name}: ${c.closes ? "closes" : "does not close"}, ` +
        `${c.vertex_count} vertices`,
    ),
  };
}

export function matrixDisplay(matrix: number[][]): string[][] {
  return matrix.map((row) => row.map((v) => String(v)));
}

export function tauDisplay(tau: CNum[][]): string[][] {
  return tau.map((row) => row.map((z) => formatComplex(z)));
}

export function riemannSummary(report: RiemannReport): string {
  const verdict = report.pass ? "pass" : "FAIL";
  return (
    `Riemann relations: ${verdict} ` +
    `(max asymmetry ${report.max_asymmetry.toExponential(2)}, ` +
    `min Im eigenvalue ${report.min_imag_eigenvalue.toFixed(6)})`
  );
}

export function periodsSummary(payload: PeriodsPayload): string[] {
  return [
    `tolerance ${payload.tol}`,
    `condition number ${payload.condition.toExponential(2)}`,
    riemannSummary(payload.riemann),
  ];
}

// 422 diagnostics: reason text plus the offending segment when known
export function liftFailureText(
  reason: string,
  segment: number | null,
): string {
  if (segment === null) return reason;
  return `${reason} [segment ${segment}]`;
}

// the service names the failing cycle inside the reason text; pull it out
// so the canvas can highlight the right polyline
export function failingCycleName(reason: string): string | null {
  const match = /cycle '([^']+)'/.exec(reason);
  return match ? match[1] : null;
}
