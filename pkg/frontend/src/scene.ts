import type { CNum, CurvePayload, LiftPayload } from "./types.js";

// Canvas-side state: the loaded curve, the polylines being drawn, and the
// view transform.  No mathematics happens here; sheets, closures and
// failures all come back from the service.

export interface LiftFailure {
  reason: string;
  segment: number | null;
}

export interface Polyline {
  name: string;
  vertices: CNum[];
  startSheet: number;
  // latest applied /api/lift response; null until the first one lands
  lift: LiftPayload | null;
  failure: LiftFailure | null;
  // geometry changed after `lift` was applied
  stale: boolean;
}

export function makePolyline(name: string, startSheet = 0): Polyline {
  return {
    name,
    vertices: [],
    startSheet,
    lift: null,
    failure: null,
    stale: false,
  };
}

// world (curve plane, im up) <-> screen (pixels, y down)

export interface Viewport {
  centerRe: number;
  centerIm: number;
  scale: number; // pixels per world unit
  width: number;
  height: number;
}

export function worldToScreen(
  view: Viewport,
  p: CNum,
): { x: number; y: number } {
  return {
    x: view.width / 2 + (p.re - view.centerRe) * view.scale,
    y: view.height / 2 - (p.im - view.centerIm) * view.scale,
  };
}

export function screenToWorld(view: Viewport, x: number, y: number): CNum {
  return {
    re: view.centerRe + (x - view.width / 2) / view.scale,
    im: view.centerIm - (y - view.height / 2) / view.scale,
  };
}

// zoom keeping the world point under the cursor fixed
export function zoomAt(
  view: Viewport,
  x: number,
  y: number,
  factor: number,
): Viewport {
  const anchor = screenToWorld(view, x, y);
  const scale = Math.min(Math.max(view.scale * factor, 1e-3), 1e6);
  const actual = scale / view.scale;
  return {
    ...view,
    scale,
    centerRe: anchor.re - (anchor.re - view.centerRe) / actual,
    centerIm: anchor.im - (anchor.im - view.centerIm) / actual,
  };
}

export function panBy(view: Viewport, dx: number, dy: number): Viewport {
  return {
    ...view,
    centerRe: view.centerRe - dx / view.scale,
    centerIm: view.centerIm + dy / view.scale,
  };
}

// frame every branch point and the base point with a margin
export function fitViewport(
  curve: CurvePayload,
  width: number,
  height: number,
): Viewport {
  const points = [curve.base_point, ...curve.branch_points.map((b) => b.point)];
  let minRe = Infinity;
  let maxRe = -Infinity;
  let minIm = Infinity;
  let maxIm = -Infinity;
  for (const p of points) {
    minRe = Math.min(minRe, p.re);
    maxRe = Math.max(maxRe, p.re);
    minIm = Math.min(minIm, p.im);
    maxIm = Math.max(maxIm, p.im);
  }
  const spanRe = Math.max(maxRe - minRe, 1e-6);
  const spanIm = Math.max(maxIm - minIm, 1e-6);
  const scale = 0.7 * Math.min(width / spanRe, height / spanIm);
  return {
    centerRe: (minRe + maxRe) / 2,
    centerIm: (minIm + maxIm) / 2,
    scale: Math.min(scale, width / 4),
    width,
    height,
  };
}

// Segment k runs from vertex k to vertex k+1 (the last one wraps back to
// vertex 0) and is coloured by the sheet at its start, as reported by the
// applied lift.  Before the first response everything shows the start
// sheet.
export function segmentSheets(line: Polyline): number[] {
  if (line.lift !== null && line.lift.sheets.length === line.vertices.length) {
    return line.lift.sheets;
  }
  return line.vertices.map(() => line.startSheet);
}

export function closureText(line: Polyline): string {
  if (line.vertices.length < 2 || line.lift === null || line.stale) {
    return "returns to start sheet: ?";
  }
  if (line.lift.closes) {
    return "returns to start sheet: yes";
  }
  return `returns to start sheet: no (ends on sheet ${line.lift.closure_sheet})`;
}

// hit-testing in screen space so the pick radius is in pixels

export function nearestVertex(
  view: Viewport,
  line: Polyline,
  x: number,
  y: number,
  radiusPx: number,
): number {
  let best = -1;
  let bestDist = radiusPx;
  line.vertices.forEach((v, i) => {
    const s = worldToScreen(view, v);
    const d = Math.hypot(s.x - x, s.y - y);
    if (d <= bestDist) {
      best = i;
      bestDist = d;
    }
  });
  return best;
}

export function segmentMidpoint(line: Polyline, segment: number): CNum {
  const n = line.vertices.length;
  const a = line.vertices[segment % n];
  const b = line.vertices[(segment + 1) % n];
  return { re: (a.re + b.re) / 2, im: (a.im + b.im) / 2 };
}

export function nearestBranchPoint(curve: CurvePayload, p: CNum): number {
  let best = -1;
  let bestDist = Infinity;
  curve.branch_points.forEach((b, i) => {
    const d = Math.hypot(b.point.re - p.re, b.point.im - p.im);
    if (d < bestDist) {
      best = i;
      bestDist = d;
    }
  });
  return best;
}
