import { labelsOnly, sheetColor, sheetLabel } from "./palette.js";
import {
  nearestBranchPoint,
  Polyline,
  segmentMidpoint,
  segmentSheets,
  Viewport,
  worldToScreen,
} from "./scene.js";
import type { CurvePayload } from "./types.js";

export interface SceneView {
  curve: CurvePayload | null;
  lines: Polyline[];
  activeLine: number;
  selectedVertex: number;
  hover: { line: number; vertex: number } | null;
  view: Viewport;
}

const BG = "#14161b";
const GRID = "#232732";
const AXIS = "#39404f";
const BRANCH = "#ffb347";
const BASE = "#e8e8e8";
const FAIL = "#ff2d2d";

export function drawScene(
  ctx: CanvasRenderingContext2D,
  scene: SceneView,
): void {
  const { view } = scene;
  ctx.fillStyle = BG;
  ctx.fillRect(0, 0, view.width, view.height);
  drawGrid(ctx, view);
  if (scene.curve !== null) {
    drawBranchPoints(ctx, scene.curve, view);
    drawBasePoint(ctx, scene.curve, view);
  }
  scene.lines.forEach((line, i) => drawPolyline(ctx, scene, line, i));
  if (scene.hover !== null) drawHoverLabel(ctx, scene);
}

function drawGrid(ctx: CanvasRenderingContext2D, view: Viewport): void {
  const step = gridStep(view.scale);
  ctx.strokeStyle = GRID;
  ctx.lineWidth = 1;
  const left = view.centerRe - view.width / 2 / view.scale;
  const right = view.centerRe + view.width / 2 / view.scale;
  const bottom = view.centerIm - view.height / 2 / view.scale;
  const top = view.centerIm + view.height / 2 / view.scale;
  ctx.beginPath();
  for (let re = Math.ceil(left / step) * step; re <= right; re += step) {
    const { x } = worldToScreen(view, { re, im: 0 });
    ctx.moveTo(x, 0);
    ctx.lineTo(x, view.height);
  }
  for (let im = Math.ceil(bottom / step) * step; im <= top; im += step) {
    const { y } = worldToScreen(view, { re: 0, im });
    ctx.moveTo(0, y);
    ctx.lineTo(view.width, y);
  }
  ctx.stroke();
  ctx.strokeStyle = AXIS;
  const origin = worldToScreen(view, { re: 0, im: 0 });
  ctx.beginPath();
  ctx.moveTo(origin.x, 0);
  ctx.lineTo(origin.x, view.height);
  ctx.moveTo(0, origin.y);
  ctx.lineTo(view.width, origin.y);
  ctx.stroke();
}

function gridStep(scale: number): number {
  // nearest 1/2/5 decade giving roughly 60 px cells
  const raw = 60 / scale;
  const decade = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (decade * m >= raw) return decade * m;
  }
  return decade * 10;
}

function drawBranchPoints(
  ctx: CanvasRenderingContext2D,
  curve: CurvePayload,
  view: Viewport,
): void {
  for (const b of curve.branch_points) {
    const s = worldToScreen(view, b.point);
    ctx.strokeStyle = BRANCH;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(s.x - 5, s.y - 5);
    ctx.lineTo(s.x + 5, s.y + 5);
    ctx.moveTo(s.x - 5, s.y + 5);
    ctx.lineTo(s.x + 5, s.y - 5);
    ctx.stroke();
    // clearance ring: lifts may not pass closer than this
    ctx.setLineDash([3, 4]);
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.arc(s.x, s.y, b.standoff * view.scale, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.setLineDash([]);
  }
}

function drawBasePoint(
  ctx: CanvasRenderingContext2D,
  curve: CurvePayload,
  view: Viewport,
): void {
  const s = worldToScreen(view, curve.base_point);
  ctx.fillStyle = BASE;
  ctx.beginPath();
  ctx.arc(s.x, s.y, 4, 0, 2 * Math.PI);
  ctx.fill();
}

function drawPolyline(
  ctx: CanvasRenderingContext2D,
  scene: SceneView,
  line: Polyline,
  index: number,
): void {
  const n = line.vertices.length;
  if (n === 0) return;
  const { view } = scene;
  const sheetCount = scene.curve ? scene.curve.sheet_count : 1;
  const sheets = segmentSheets(line);
  const active = index === scene.activeLine;
  const failSegment =
    line.failure !== null && line.failure.segment !== null
      ? line.failure.segment
      : -1;

  for (let k = 0; k < n; k++) {
    const isClosing = k === n - 1;
    if (isClosing && n < 2) break;
    const a = worldToScreen(view, line.vertices[k]);
    const b = worldToScreen(view, line.vertices[(k + 1) % n]);
    const failing = k === failSegment;
    ctx.strokeStyle = failing ? FAIL : sheetColor(sheets[k], sheetCount);
    ctx.lineWidth = failing ? 4 : active ? 2.5 : 1.5;
    ctx.globalAlpha = line.stale ? 0.45 : 1;
    ctx.setLineDash(isClosing ? [6, 4] : []);
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.stroke();
  }
  ctx.setLineDash([]);
  ctx.globalAlpha = 1;

  // a failed lift also flags the branch point nearest the bad segment
  if (failSegment >= 0 && scene.curve !== null && n >= 2) {
    const near = nearestBranchPoint(
      scene.curve,
      segmentMidpoint(line, failSegment),
    );
    if (near >= 0) {
      const s = worldToScreen(view, scene.curve.branch_points[near].point);
      ctx.strokeStyle = FAIL;
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.arc(s.x, s.y, 11, 0, 2 * Math.PI);
      ctx.stroke();
    }
  }

  line.vertices.forEach((v, i) => {
    const s = worldToScreen(view, v);
    const selected = active && i === scene.selectedVertex;
    ctx.fillStyle = selected ? "#ffffff" : sheetColor(sheets[i], sheetCount);
    ctx.fillRect(s.x - 3, s.y - 3, 6, 6);
    if (selected) {
      ctx.strokeStyle = "#ffffff";
      ctx.lineWidth = 1;
      ctx.strokeRect(s.x - 5.5, s.y - 5.5, 11, 11);
    }
  });
}

function drawHoverLabel(
  ctx: CanvasRenderingContext2D,
  scene: SceneView,
): void {
  const hover = scene.hover;
  if (hover === null) return;
  const line = scene.lines[hover.line];
  if (line === undefined || line.vertices[hover.vertex] === undefined) return;
  const sheets = segmentSheets(line);
  const s = worldToScreen(scene.view, line.vertices[hover.vertex]);
  const text = sheetLabel(sheets[hover.vertex]);
  ctx.font = "12px system-ui, sans-serif";
  const w = ctx.measureText(text).width + 10;
  ctx.fillStyle = "rgba(20, 22, 27, 0.92)";
  ctx.fillRect(s.x + 8, s.y - 22, w, 17);
  ctx.strokeStyle = labelsOnly(
    scene.curve ? scene.curve.sheet_count : 1,
  )
    ? "#ffffff"
    : sheetColor(sheets[hover.vertex], scene.curve?.sheet_count ?? 1);
  ctx.strokeRect(s.x + 8, s.y - 22, w, 17);
  ctx.fillStyle = "#e8e8e8";
  ctx.fillText(text, s.x + 13, s.y - 9);
}
