import { ApiClient, DEFAULT_BASE_URL, isApiError } from "./api.js";
import { buildCycleFile, parseCycleFile, serializeCycleFile } from "./cyclefile.js";
import {
  basisPanelModel,
  failingCycleName,
  liftFailureText,
  periodsSummary,
  tauDisplay,
} from "./panel.js";
import { RequestScheduler } from "./scheduler.js";
import {
  closureText,
  fitViewport,
  makePolyline,
  nearestVertex,
  panBy,
  Polyline,
  screenToWorld,
  zoomAt,
} from "./scene.js";
import { drawScene, SceneView } from "./render.js";
import type { BasisCheckPayload, CNum, CycleFile, LiftPayload } from "./types.js";

interface LiftRequest {
  points: CNum[];
  startSheet: number;
  edit: number;
}

const params = new URLSearchParams(location.search);
const api = new ApiClient(params.get("api") ?? DEFAULT_BASE_URL);

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d") as CanvasRenderingContext2D;

const el = (id: string) => document.getElementById(id) as HTMLElement;
const banner = el("banner");
const status = el("status");
const cycleList = el("cycle-list");
const basisPanel = el("basis-panel");
const periodsPanel = el("periods-panel");
const curveInput = el("curve-input") as HTMLInputElement;
const computeButton = el("compute-periods") as HTMLButtonElement;

const scene: SceneView = {
  curve: null,
  lines: [],
  activeLine: -1,
  selectedVertex: -1,
  hover: null,
  view: { centerRe: 0, centerIm: 0, scale: 160, width: 800, height: 600 },
};

let curveText = "";
let basepoint: CNum = { re: 0, im: 0 };
let lastBasis: BasisCheckPayload | null = null;
const editCounts = new WeakMap<Polyline, number>();
const schedulers = new WeakMap<
  Polyline,
  RequestScheduler<LiftRequest, LiftPayload>
>();

function schedulerFor(line: Polyline): RequestScheduler<LiftRequest, LiftPayload> {
  let sched = schedulers.get(line);
  if (sched === undefined) {
    sched = new RequestScheduler<LiftRequest, LiftPayload>(
      (req) => api.lift(curveText, req.points, req.startSheet),
      (req, result, error) => applyLift(line, req, result, error),
    );
    schedulers.set(line, sched);
  }
  return sched;
}

function applyLift(
  line: Polyline,
  req: LiftRequest,
  result: LiftPayload | null,
  error: unknown,
): void {
  if (!scene.lines.includes(line)) return; // deleted while in flight
  if (result !== null) {
    line.lift = result;
    line.failure = null;
    line.stale = (editCounts.get(line) ?? 0) !== req.edit;
    banner.hidden = true;
  } else if (isApiError(error)) {
    line.failure = { reason: error.reason, segment: error.segment };
    line.stale = false;
    banner.hidden = true;
    setStatus(liftFailureText(error.reason, error.segment));
  } else {
    // network failure: keep the drawing, tell the user the edits are local
    banner.textContent = `service unreachable at ${api.baseUrl}; edits stay local`;
    banner.hidden = false;
  }
  refresh();
}

function markEdited(line: Polyline): void {
  const edit = (editCounts.get(line) ?? 0) + 1;
  editCounts.set(line, edit);
  line.stale = true;
  if (line.vertices.length > 0) {
    schedulerFor(line).schedule({
      points: line.vertices.map((v) => ({ re: v.re, im: v.im })),
      startSheet: line.startSheet,
      edit,
    });
  }
  refresh();
}

function setStatus(text: string): void {
  status.textContent = text;
}

// ------------------------------------------------------------ curve loading

async function loadCurve(text: string, base?: CNum): Promise<boolean> {
  try {
    const payload = await api.curve(
      base === undefined ? { curve: text } : { curve: text, basepoint: base },
    );
    scene.curve = payload;
    curveText = text;
    basepoint = payload.base_point;
    banner.hidden = true;
    scene.view = fitViewport(payload, scene.view.width, scene.view.height);
    setStatus(
      `curve loaded: ${payload.sheet_count} sheets, ` +
        `${payload.branch_points.length} finite branch points` +
        (payload.includes_infinity ? " (+ infinity)" : ""),
    );
    return true;
  } catch (err) {
    reportError(err);
    return false;
  }
}

function reportError(err: unknown): void {
  if (isApiError(err)) {
    setStatus(liftFailureText(err.reason, err.segment));
  } else {
    banner.textContent = `service unreachable at ${api.baseUrl}; edits stay local`;
    banner.hidden = false;
  }
}

async function applyCycleFile(file: CycleFile): Promise<void> {
  if (!(await loadCurve(file.curve, file.basepoint))) return;
  scene.lines = file.cycles.map((c) => {
    const line = makePolyline(c.name, c.points[0].sheet);
    line.vertices = c.points.map((p) => ({ re: p.re, im: p.im }));
    line.stale = true;
    return line;
  });
  scene.activeLine = scene.lines.length > 0 ? 0 : -1;
  scene.selectedVertex = -1;
  lastBasis = null;
  basisPanel.innerHTML = "";
  periodsPanel.innerHTML = "";
  computeButton.disabled = true;
  for (const line of scene.lines) {
    markEdited(line);
    schedulerFor(line).flush(); // a load is not a rapid edit
  }
  refresh();
}

// ------------------------------------------------------------ cycle list UI

function refreshCycleList(): void {
  cycleList.innerHTML = "";
  scene.lines.forEach((line, i) => {
    const row = document.createElement("div");
    row.className = "cycle-row" + (i === scene.activeLine ? " active" : "");
    const name = document.createElement("span");
    name.className = "cycle-name";
    name.textContent = line.name;
    const closure = document.createElement("span");
    closure.className = "closure";
    closure.textContent = closureText(line);
    const del = document.createElement("button");
    del.textContent = "x";
    del.title = "delete cycle";
    del.addEventListener("click", (ev) => {
      ev.stopPropagation();
      schedulers.get(line)?.cancel();
      scene.lines.splice(i, 1);
      if (scene.activeLine >= scene.lines.length) {
        scene.activeLine = scene.lines.length - 1;
      }
      scene.selectedVertex = -1;
      refresh();
    });
    row.addEventListener("click", () => {
      scene.activeLine = i;
      scene.selectedVertex = -1;
      refresh();
    });
    row.append(name, closure, del);
    if (line.failure !== null) {
      const failure = document.createElement("div");
      failure.className = "failure";
      failure.textContent = liftFailureText(
        line.failure.reason,
        line.failure.segment,
      );
      row.append(failure);
    }
    cycleList.append(row);
  });
}

function nextCycleName(): string {
  const used = new Set(scene.lines.map((l) => l.name));
  for (let k = 1; ; k++) {
    if (!used.has(`c${k}`)) return `c${k}`;
  }
}

// ------------------------------------------------------------ basis actions

function currentFile(): CycleFile | null {
  if (scene.curve === null || scene.lines.length === 0) {
    setStatus("draw at least one cycle first");
    return null;
  }
  for (const line of scene.lines) {
    if (line.vertices.length < 2) {
      setStatus(`cycle ${line.name} needs at least two vertices`);
      return null;
    }
    if (line.lift === null || line.stale || line.failure !== null) {
      setStatus(`cycle ${line.name} has no up-to-date lift yet`);
      return null;
    }
  }
  return buildCycleFile(
    curveText,
    basepoint,
    scene.lines.map((l) => ({
      name: l.name,
      vertices: l.vertices,
      // sheet labels always come from the service's lift response
      sheets: (l.lift as LiftPayload).sheets,
    })),
  );
}

function renderMatrixTable(names: string[], matrix: string[][]): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "matrix";
  const head = table.insertRow();
  head.insertCell();
  for (const n of names) {
    const cell = document.createElement("th");
    cell.textContent = n;
    head.append(cell);
  }
  matrix.forEach((row, i) => {
    const tr = table.insertRow();
    const th = document.createElement("th");
    th.textContent = names[i] ?? String(i);
    tr.append(th);
    for (const value of row) {
      const td = tr.insertCell();
      td.textContent = value;
    }
  });
  return table;
}

async function checkBasis(): Promise<void> {
  const file = currentFile();
  if (file === null) return;
  basisPanel.innerHTML = "";
  try {
    const payload = await api.basisCheck(file);
    lastBasis = payload;
    const model = basisPanelModel(payload);
    const badge = document.createElement("div");
    badge.className = "badge " + (model.canonical ? "good" : "plain");
    badge.textContent = model.badge;
    basisPanel.append(badge);
    basisPanel.append(
      renderMatrixTable(
        model.names,
        model.matrix.map((row) => row.map((v) => String(v))),
      ),
    );
    const notes = document.createElement("div");
    notes.className = "notes";
    notes.textContent = model.cycleNotes.join("; ");
    basisPanel.append(notes);
    computeButton.disabled = !model.canonical;
    setStatus(model.badge);
  } catch (err) {
    lastBasis = null;
    computeButton.disabled = true;
    if (isApiError(err)) {
      const text = liftFailureText(err.reason, err.segment);
      const failure = document.createElement("div");
      failure.className = "failure";
      failure.textContent = text;
      basisPanel.append(failure);
      const name = failingCycleName(err.reason);
      const line = scene.lines.find((l) => l.name === name);
      if (line !== undefined) {
        line.failure = { reason: err.reason, segment: err.segment };
      }
      setStatus(text);
      refresh();
    } else {
      reportError(err);
    }
  }
}

async function computePeriods(): Promise<void> {
  const file = currentFile();
  if (file === null) return;
  periodsPanel.innerHTML = "";
  setStatus("integrating periods...");
  computeButton.disabled = true;
  try {
    const payload = await api.periods(file);
    const title = document.createElement("div");
    title.className = "badge good";
    title.textContent = "period matrix tau";
    periodsPanel.append(title);
    periodsPanel.append(
      renderMatrixTable(lastBasis?.names.slice(0, payload.tau.length) ?? [],
        tauDisplay(payload.tau)),
    );
    const summary = document.createElement("div");
    summary.className = "notes";
    summary.textContent = periodsSummary(payload).join("; ");
    periodsPanel.append(summary);
    if (scene.curve?.model?.startsWith("klein") || curveText.startsWith("klein")) {
      try {
        const reference = await api.kleinReference();
        const refTitle = document.createElement("div");
        refTitle.className = "badge plain";
        refTitle.textContent = "closed-form reference tau";
        periodsPanel.append(refTitle);
        periodsPanel.append(
          renderMatrixTable([], tauDisplay(reference.tau_theorem)),
        );
      } catch {
        // reference display is optional
      }
    }
    setStatus("periods computed");
  } catch (err) {
    reportError(err);
  } finally {
    computeButton.disabled = lastBasis === null || !lastBasis.canonical;
  }
}

async function compareWithFile(text: string): Promise<void> {
  const dst = currentFile();
  if (dst === null) return;
  try {
    const src = parseCycleFile(text);
    const payload = await api.transform(src, dst);
    const title = document.createElement("div");
    title.className = "badge " + (payload.symplectic ? "good" : "plain");
    title.textContent = payload.symplectic
      ? "transform found: symplectic"
      : "transform found: NOT symplectic";
    basisPanel.append(title);
    basisPanel.append(
      renderMatrixTable([], payload.matrix.map((r) => r.map(String))),
    );
    setStatus("transform computed against loaded file");
  } catch (err) {
    if (err instanceof Error && !isApiError(err)) setStatus(err.message);
    else reportError(err);
  }
}

// ------------------------------------------------------------ save / load

function saveFile(): void {
  const file = currentFile();
  if (file === null) return;
  const blob = new Blob([serializeCycleFile(file) + "\n"], {
    type: "application/json",
  });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "cycles.json";
  a.click();
  URL.revokeObjectURL(a.href);
  setStatus("cycle file saved");
}

async function loadShipped(path: string): Promise<void> {
  try {
    const response = await fetch(path);
    if (!response.ok) throw new Error(`cannot fetch ${path}`);
    await applyCycleFile(parseCycleFile(await response.text()));
  } catch (err) {
    setStatus(
      err instanceof Error ? err.message : `cannot load ${path}`,
    );
  }
}

// ------------------------------------------------------------ canvas input

let dragging: { line: number; vertex: number } | null = null;
let panning = false;
let downAt: { x: number; y: number } | null = null;
let moved = false;

function canvasPos(ev: MouseEvent): { x: number; y: number } {
  const rect = canvas.getBoundingClientRect();
  return { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
}

function hitVertex(x: number, y: number): { line: number; vertex: number } | null {
  for (let i = scene.lines.length - 1; i >= 0; i--) {
    const v = nearestVertex(scene.view, scene.lines[i], x, y, 8);
    if (v >= 0) return { line: i, vertex: v };
  }
  return null;
}

canvas.addEventListener("pointerdown", (ev) => {
  if (scene.curve === null) return;
  const pos = canvasPos(ev);
  downAt = pos;
  moved = false;
  const hit = hitVertex(pos.x, pos.y);
  if (hit !== null) {
    dragging = hit;
    scene.activeLine = hit.line;
    scene.selectedVertex = hit.vertex;
    refresh();
  } else {
    panning = true;
  }
  canvas.setPointerCapture(ev.pointerId);
});

canvas.addEventListener("pointermove", (ev) => {
  const pos = canvasPos(ev);
  if (downAt !== null && Math.hypot(pos.x - downAt.x, pos.y - downAt.y) > 3) {
    moved = true;
  }
  if (dragging !== null && moved) {
    const line = scene.lines[dragging.line];
    line.vertices[dragging.vertex] = screenToWorld(scene.view, pos.x, pos.y);
    markEdited(line);
  } else if (panning && moved && downAt !== null) {
    scene.view = panBy(scene.view, pos.x - downAt.x, pos.y - downAt.y);
    downAt = pos;
    draw();
  } else {
    scene.hover = hitVertex(pos.x, pos.y);
    draw();
  }
});

canvas.addEventListener("pointerup", (ev) => {
  const pos = canvasPos(ev);
  if (!moved && dragging === null && scene.curve !== null) {
    // plain click appends a vertex to the active cycle
    if (scene.activeLine < 0) {
      const line = makePolyline(nextCycleName());
      scene.lines.push(line);
      scene.activeLine = scene.lines.length - 1;
    }
    const line = scene.lines[scene.activeLine];
    line.vertices.push(screenToWorld(scene.view, pos.x, pos.y));
    scene.selectedVertex = line.vertices.length - 1;
    markEdited(line);
  }
  dragging = null;
  panning = false;
  downAt = null;
  moved = false;
  canvas.releasePointerCapture(ev.pointerId);
});

canvas.addEventListener("dblclick", (ev) => {
  const pos = canvasPos(ev);
  const hit = hitVertex(pos.x, pos.y);
  if (hit === null) return;
  const line = scene.lines[hit.line];
  line.vertices.splice(hit.vertex, 1);
  scene.selectedVertex = -1;
  if (line.vertices.length === 0) {
    schedulers.get(line)?.cancel();
    scene.lines.splice(hit.line, 1);
    if (scene.activeLine >= scene.lines.length) {
      scene.activeLine = scene.lines.length - 1;
    }
    refresh();
  } else {
    markEdited(line);
  }
});

canvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  const pos = canvasPos(ev);
  scene.view = zoomAt(scene.view, pos.x, pos.y, ev.deltaY < 0 ? 1.15 : 1 / 1.15);
  draw();
});

// ------------------------------------------------------------ shell wiring

function draw(): void {
  drawScene(ctx, scene);
}

function refresh(): void {
  refreshCycleList();
  draw();
}

function resizeCanvas(): void {
  const rect = canvas.getBoundingClientRect();
  const dpr = window.devicePixelRatio || 1;
  canvas.width = Math.round(rect.width * dpr);
  canvas.height = Math.round(rect.height * dpr);
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  scene.view = { ...scene.view, width: rect.width, height: rect.height };
  draw();
}

el("load-curve").addEventListener("click", () => {
  void loadCurve(curveInput.value.trim());
});
curveInput.addEventListener("keydown", (ev) => {
  if ((ev as KeyboardEvent).key === "Enter") void loadCurve(curveInput.value.trim());
});
el("add-cycle").addEventListener("click", () => {
  if (scene.curve === null) {
    setStatus("load a curve first");
    return;
  }
  scene.lines.push(makePolyline(nextCycleName()));
  scene.activeLine = scene.lines.length - 1;
  scene.selectedVertex = -1;
  refresh();
});
el("check-basis").addEventListener("click", () => void checkBasis());
computeButton.addEventListener("click", () => void computePeriods());
el("save-file").addEventListener("click", saveFile);
el("load-shipped").addEventListener("click", () =>
  void loadShipped("data/klein-adapted.json"),
);
el("load-shipped-rl").addEventListener("click", () =>
  void loadShipped("data/klein-rl.json"),
);

(el("load-file") as HTMLInputElement).addEventListener("change", async (ev) => {
  const input = ev.target as HTMLInputElement;
  const file = input.files?.[0];
  if (file === undefined) return;
  try {
    await applyCycleFile(parseCycleFile(await file.text()));
  } catch (err) {
    setStatus(err instanceof Error ? err.message : "cannot load file");
  }
  input.value = "";
});

(el("compare-file") as HTMLInputElement).addEventListener("change", async (ev) => {
  const input = ev.target as HTMLInputElement;
  const file = input.files?.[0];
  if (file === undefined) return;
  await compareWithFile(await file.text());
  input.value = "";
});

window.addEventListener("resize", resizeCanvas);
resizeCanvas();
setStatus(`service: ${api.baseUrl}`);
void loadCurve("klein-zw");
