import type { CNum, CycleFile, CyclePoint, CycleSpec } from "./types.js";

// Parsing and serialization of the shared cycle file format.  Serialization
// uses JSON's shortest round-trip float form and a fixed key order, so
// save-then-load reproduces every coordinate and sheet label exactly and
// repeated round trips are byte stable.

function fail(msg: string): never {
  throw new Error(msg);
}

function asFinite(value: unknown, where: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    fail(`${where} must be a finite number`);
  }
  return value;
}

function asCNum(value: unknown, where: string): CNum {
  if (typeof value !== "object" || value === null) {
    fail(`${where} must be an object with re and im`);
  }
  const v = value as Record<string, unknown>;
  return { re: asFinite(v.re, `${where}.re`), im: asFinite(v.im, `${where}.im`) };
}

function asPoint(value: unknown, where: string): CyclePoint {
  const base = asCNum(value, where);
  const sheet = (value as Record<string, unknown>).sheet;
  if (typeof sheet !== "number" || !Number.isInteger(sheet) || sheet < 0) {
    fail(`${where}.sheet must be a non-negative integer`);
  }
  return { re: base.re, im: base.im, sheet };
}

function asCycle(value: unknown, index: number): CycleSpec {
  if (typeof value !== "object" || value === null) {
    fail(`cycles[${index}] must be an object`);
  }
  const v = value as Record<string, unknown>;
  if (typeof v.name !== "string" || v.name.length === 0) {
    fail(`cycles[${index}].name must be a non-empty string`);
  }
  if (!Array.isArray(v.points) || v.points.length === 0) {
    fail(`cycle ${v.name}: needs a non-empty points array`);
  }
  const points = v.points.map((p, i) => asPoint(p, `cycle ${v.name} point ${i}`));
  return { name: v.name, points };
}

export function parseCycleFile(text: string): CycleFile {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    fail("cycle file is not valid JSON");
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    fail("cycle file must be a JSON object");
  }
  const doc = raw as Record<string, unknown>;
  if (typeof doc.curve !== "string" || doc.curve.trim() === "") {
    fail("cycle file is missing 'curve'");
  }
  if (!Array.isArray(doc.cycles) || doc.cycles.length === 0) {
    fail("cycle file needs a non-empty 'cycles' array");
  }
  const names = new Set<string>();
  const cycles = doc.cycles.map((c, k) => {
    const cycle = asCycle(c, k);
    if (names.has(cycle.name)) fail(`duplicate cycle name '${cycle.name}'`);
    names.add(cycle.name);
    return cycle;
  });
  return {
    curve: doc.curve,
    basepoint: asCNum(doc.basepoint, "basepoint"),
    cycles,
  };
}

// JSON.stringify prints -0 as "0", which would silently flip the sign bit
// of a coordinate on save; the service's content hashing tells the two
// apart, so the sign has to survive
function numText(value: number): string {
  if (Object.is(value, -0)) return "-0.0";
  return JSON.stringify(value);
}

export function serializeCycleFile(file: CycleFile): string {
  // keys alphabetical to mirror the service's canonical dumps
  const point = (p: CyclePoint) =>
    `{"im":${numText(p.im)},"re":${numText(p.re)},"sheet":${p.sheet}}`;
  const cycle = (c: CycleSpec) =>
    `{"name":${JSON.stringify(c.name)},"points":[` +
    c.points.map(point).join(",") +
    "]}";
  return (
    `{"basepoint":{"im":${numText(file.basepoint.im)}` +
    `,"re":${numText(file.basepoint.re)}}` +
    `,"curve":${JSON.stringify(file.curve)}` +
    `,"cycles":[${file.cycles.map(cycle).join(",")}]}`
  );
}

export function cloneCycleFile(file: CycleFile): CycleFile {
  return parseCycleFile(serializeCycleFile(file));
}

// What the canvas hands over on save.  Sheets must come from the latest
// lift response, never from anything computed locally.
export interface LabeledLine {
  name: string;
  vertices: CNum[];
  sheets: number[];
}

export function buildCycleFile(
  curve: string,
  basepoint: CNum,
  lines: LabeledLine[],
): CycleFile {
  const cycles = lines.map((line) => {
    if (line.sheets.length !== line.vertices.length) {
      fail(`cycle ${line.name}: sheet labels do not cover every vertex`);
    }
    return {
      name: line.name,
      points: line.vertices.map((v, i) => ({
        re: v.re,
        im: v.im,
        sheet: line.sheets[i],
      })),
    };
  });
  return { curve, basepoint, cycles };
}
