import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import {
  buildCycleFile,
  cloneCycleFile,
  parseCycleFile,
  serializeCycleFile,
} from "../src/cyclefile.js";

const shippedText = readFileSync(
  fileURLToPath(new URL("../data/klein-adapted.json", import.meta.url)),
  "utf8",
);

describe("parseCycleFile", () => {
  it("reads the shipped Klein adapted basis", () => {
    const file = parseCycleFile(shippedText);
    expect(file.curve).toBe("klein-zw");
    expect(file.basepoint).toEqual({ re: 0, im: 0 });
    expect(file.cycles.map((c) => c.name)).toEqual([
      "a1",
      "a2",
      "a3",
      "b1",
      "b2",
      "b3",
    ]);
    for (const cycle of file.cycles) {
      expect(cycle.points.length).toBeGreaterThan(2);
      for (const p of cycle.points) {
        expect(Number.isInteger(p.sheet)).toBe(true);
        expect(p.sheet).toBeGreaterThanOrEqual(0);
        expect(p.sheet).toBeLessThan(7);
      }
    }
  });

  it.each([
    ["not json at all", "cycle file is not valid JSON"],
    ["[1, 2]", "must be a JSON object"],
    ['{"basepoint": {"re": 0, "im": 0}, "cycles": []}', "missing 'curve'"],
    ['{"curve": "y^2 - x", "basepoint": {"re": 0, "im": 0}, "cycles": []}',
      "non-empty 'cycles'"],
    ['{"curve": "y^2 - x", "basepoint": {"re": 0}, "cycles": [{"name": "a", "points": [{"re": 0, "im": 0, "sheet": 0}]}]}',
      "basepoint.im"],
    ['{"curve": "y^2 - x", "basepoint": {"re": 0, "im": 0}, "cycles": [{"name": "a", "points": [{"re": 0, "im": 0, "sheet": 0.5}]}]}',
      "sheet"],
    ['{"curve": "y^2 - x", "basepoint": {"re": 0, "im": 0}, "cycles": [{"name": "a", "points": [{"re": 0, "im": 0, "sheet": 0}]}, {"name": "a", "points": [{"re": 1, "im": 0, "sheet": 0}]}]}',
      "duplicate cycle name"],
  ])("rejects malformed input: %s", (text, message) => {
    expect(() => parseCycleFile(text)).toThrowError(message);
  });
});

describe("serializeCycleFile", () => {
  it("round trips the shipped file without losing any value", () => {
    const parsed = parseCycleFile(shippedText);
    const reloaded = parseCycleFile(serializeCycleFile(parsed));
    expect(reloaded).toEqual(parsed);
    // exact float identity, not approximate equality
    parsed.cycles.forEach((cycle, c) => {
      cycle.points.forEach((p, i) => {
        const q = reloaded.cycles[c].points[i];
        expect(Object.is(p.re, q.re)).toBe(true);
        expect(Object.is(p.im, q.im)).toBe(true);
        expect(q.sheet).toBe(p.sheet);
      });
    });
  });

  it("is a fixed point under repeated round trips", () => {
    const once = serializeCycleFile(parseCycleFile(shippedText));
    const twice = serializeCycleFile(parseCycleFile(once));
    expect(twice).toBe(once);
  });

  it("preserves awkward floating-point coordinates exactly", () => {
    const file = parseCycleFile(
      JSON.stringify({
        curve: "y^2 - x",
        basepoint: { re: 0.1 + 0.2, im: -0 },
        cycles: [
          {
            name: "jitter",
            points: [
              { re: 1e-17, im: -3.4435e5, sheet: 0 },
              { re: Math.PI, im: 2 / 3, sheet: 1 },
              { re: -0.30000000000000004, im: 5.551115123125783e-17, sheet: 0 },
            ],
          },
        ],
      }),
    );
    const back = cloneCycleFile(file);
    expect(Object.is(back.basepoint.re, 0.1 + 0.2)).toBe(true);
    expect(Object.is(back.cycles[0].points[1].re, Math.PI)).toBe(true);
    expect(
      Object.is(back.cycles[0].points[2].im, 5.551115123125783e-17),
    ).toBe(true);
  });

  it("keeps the sign of a negative zero", () => {
    // the service content-hashes coordinates by their repr, where -0.0
    // and 0.0 differ; flipping the sign on save would change the file id
    const text =
      '{"basepoint":{"im":-0.0,"re":1.0},"curve":"y^2 - x",' +
      '"cycles":[{"name":"a","points":[{"im":-0.0,"re":0.5,"sheet":0},' +
      '{"im":0.0,"re":0.75,"sheet":0}]}]}';
    const file = parseCycleFile(text);
    expect(Object.is(file.basepoint.im, -0)).toBe(true);
    const back = parseCycleFile(serializeCycleFile(file));
    expect(Object.is(back.basepoint.im, -0)).toBe(true);
    expect(Object.is(back.cycles[0].points[0].im, -0)).toBe(true);
    expect(Object.is(back.cycles[0].points[1].im, 0)).toBe(true);
  });
});

describe("buildCycleFile", () => {
  it("pairs vertices with the sheets from the lift response", () => {
    const file = buildCycleFile(
      "y^2 - x",
      { re: 1, im: 0 },
      [
        {
          name: "loop",
          vertices: [
            { re: 1, im: 0 },
            { re: -1, im: 0.5 },
          ],
          sheets: [0, 1],
        },
      ],
    );
    expect(file.cycles[0].points).toEqual([
      { re: 1, im: 0, sheet: 0 },
      { re: -1, im: 0.5, sheet: 1 },
    ]);
  });

  it("refuses to save when sheet labels are missing for a vertex", () => {
    expect(() =>
      buildCycleFile("y^2 - x", { re: 1, im: 0 }, [
        {
          name: "loop",
          vertices: [
            { re: 1, im: 0 },
            { re: -1, im: 0.5 },
          ],
          sheets: [0],
        },
      ]),
    ).toThrowError("sheet labels do not cover every vertex");
  });
});
