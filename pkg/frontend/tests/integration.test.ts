// End-to-end tests against a live service instance.  Everything the UI
// shows is asserted through the same client and view-model code the app
// uses; nothing mathematical is recomputed here.
import { ChildProcess, spawn } from "node:child_process";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient, ApiError, isApiError } from "../src/api.js";
import {
  cloneCycleFile,
  parseCycleFile,
  serializeCycleFile,
} from "../src/cyclefile.js";
import {
  basisPanelModel,
  failingCycleName,
  isStandardJ,
  tauDisplay,
} from "../src/panel.js";
import { closureText, makePolyline } from "../src/scene.js";
import type { CNum } from "../src/types.js";

const PORT = 8942;
const BASE = `http://127.0.0.1:${PORT}`;
const api = new ApiClient(BASE);

const shippedText = readFileSync(
  fileURLToPath(new URL("../data/klein-adapted.json", import.meta.url)),
  "utf8",
);
const rlText = readFileSync(
  fileURLToPath(new URL("../data/klein-rl.json", import.meta.url)),
  "utf8",
);

let server: ChildProcess | null = null;

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-c", "from periodlab.cli import main; main(['serve'])"],
    {
      env: { ...process.env, PERIODLAB_PORT: String(PORT) },
      stdio: "ignore",
    },
  );
  const deadline = Date.now() + 90_000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/api/klein/reference`);
      if (response.ok) return;
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      throw new Error(`service never came up on ${BASE}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}, 120_000);

afterAll(() => {
  server?.kill();
});

function circle(turns: number): CNum[] {
  const points: CNum[] = [];
  for (let t = 0; t < turns; t++) {
    for (let k = 0; k < 16; k++) {
      const angle = (2 * Math.PI * k) / 16;
      points.push({ re: Math.cos(angle), im: Math.sin(angle) });
    }
  }
  return points;
}

function transitions(sheets: number[]): number {
  let count = 0;
  for (let k = 1; k < sheets.length; k++) {
    if (sheets[k] !== sheets[k - 1]) count++;
  }
  return count;
}

describe("shipped Klein adapted basis", () => {
  it(
    "renders six cycles whose basis panel shows J",
    async () => {
      const file = parseCycleFile(shippedText);
      expect(file.cycles).toHaveLength(6);
      const check = await api.basisCheck(file);
      expect(check.canonical).toBe(true);
      expect(check.names).toEqual(["a1", "a2", "a3", "b1", "b2", "b3"]);
      expect(isStandardJ(check.matrix)).toBe(true);
      const g = 3;
      check.matrix.forEach((row, i) => {
        row.forEach((value, j) => {
          expect(value).toBe(j === i + g ? 1 : j === i - g ? -1 : 0);
        });
      });
      const panel = basisPanelModel(check);
      expect(panel.isStandardJ).toBe(true);
      expect(panel.badge).toBe("canonical basis (intersection matrix is J)");
      for (const note of panel.cycleNotes) {
        expect(note).toContain("closes");
      }
    },
    120_000,
  );

  it(
    "computes tau matching the closed-form display",
    async () => {
      const file = parseCycleFile(shippedText);
      const payload = await api.periods(file, { tol: 1e-8 });
      expect(payload.riemann.pass).toBe(true);

      // tau = (1/2) [[e,1,1],[1,e,1],[1,1,e]] with e = (-1 + i sqrt 7)/2
      const diag = { re: -0.25, im: Math.sqrt(7) / 4 };
      const off = { re: 0.5, im: 0 };
      expect(payload.tau).toHaveLength(3);
      payload.tau.forEach((row, i) => {
        expect(row).toHaveLength(3);
        row.forEach((z, j) => {
          const want = i === j ? diag : off;
          expect(Math.abs(z.re - want.re)).toBeLessThan(1e-8);
          expect(Math.abs(z.im - want.im)).toBeLessThan(1e-8);
        });
      });

      // the panel's rendering agrees digit for digit with the rendering of
      // the service's own closed-form reference matrix
      const display = tauDisplay(payload.tau);
      expect(display[0][0]).toBe("-0.250000+0.661438i");
      expect(display[0][1]).toBe("+0.500000+0.000000i");
      const reference = await api.kleinReference();
      expect(tauDisplay(reference.tau_theorem)).toEqual(display);
    },
    300_000,
  );

  it(
    "RL basis file in (t,s) is canonical and the transform against the shipped basis is symplectic",
    async () => {
      const rl = parseCycleFile(rlText);
      expect(rl.curve).toBe("klein-ts");
      const check = await api.basisCheck(rl);
      expect(check.canonical).toBe(true);
      expect(basisPanelModel(check).badge).toContain("canonical");
      const transform = await api.transform(rl, parseCycleFile(shippedText));
      expect(transform.symplectic).toBe(true);
      expect(transform.matrix).toHaveLength(6);
      for (const row of transform.matrix) {
        expect(row).toHaveLength(6);
        for (const value of row) {
          expect(Number.isInteger(value)).toBe(true);
        }
      }
    },
    300_000,
  );
});

describe("validation diagnostics", () => {
  it(
    "a deliberately broken cycle reports 422 on the correct segment",
    async () => {
      const broken = cloneCycleFile(parseCycleFile(shippedText));
      const point = broken.cycles[0].points[3];
      point.sheet = (point.sheet + 1) % 7;
      let caught: unknown = null;
      try {
        await api.basisCheck(broken);
      } catch (err) {
        caught = err;
      }
      expect(caught).toBeInstanceOf(ApiError);
      const failure = caught as ApiError;
      expect(failure.status).toBe(422);
      // vertex 3 carries the wrong sheet, so the edge arriving at it fails
      expect(failure.segment).toBe(2);
      expect(failure.reason).toContain("expected sheet");
      expect(failingCycleName(failure.reason)).toBe("a1");
    },
    120_000,
  );

  it("a segment dragged across a branch point fails the lift", async () => {
    let caught: unknown = null;
    try {
      await api.lift(
        "y^2 - x",
        [
          { re: 1, im: 0 },
          { re: -1, im: 0 },
        ],
        0,
      );
    } catch (err) {
      caught = err;
    }
    expect(caught).toBeInstanceOf(ApiError);
    const failure = caught as ApiError;
    expect(failure.status).toBe(422);
    expect(failure.segment).toBe(0);
    expect(failure.reason).toContain("segment 0");
  });

  it("an unreachable service is not mistaken for a diagnostic", async () => {
    const offline = new ApiClient("http://127.0.0.1:59999");
    let caught: unknown = null;
    try {
      await offline.lift("y^2 - x", [{ re: 1, im: 0 }], 0);
    } catch (err) {
      caught = err;
    }
    expect(caught).not.toBeNull();
    expect(isApiError(caught)).toBe(false); // banner path, not a 4xx panel
  });
});

describe("cycle file round trip", () => {
  it(
    "save then load is lossless, byte-stable, and keeps the same content id",
    async () => {
      const parsed = parseCycleFile(shippedText);
      const saved = serializeCycleFile(parsed);
      const reloaded = parseCycleFile(saved);
      expect(reloaded).toEqual(parsed);
      expect(serializeCycleFile(reloaded)).toBe(saved);
      // the service derives the set id from the parsed content, so id
      // equality proves geometry and sheet labels survived exactly
      const original = await api.basisCheck(parseCycleFile(shippedText));
      const roundTripped = await api.basisCheck(reloaded);
      expect(roundTripped.id).toBe(original.id);
    },
    120_000,
  );

  it(
    "a single cycle alone yields the 1x1 zero matrix",
    async () => {
      const file = parseCycleFile(shippedText);
      const solo = { ...file, cycles: [file.cycles[0]] };
      const check = await api.basisCheck(solo);
      expect(check.matrix).toEqual([[0]]);
      expect(check.canonical).toBe(false);
      expect(basisPanelModel(check).badge).toBe("single cycle");
    },
    120_000,
  );
});

describe("square-root monodromy", () => {
  it("a loop around the branch point flips color once and does not close", async () => {
    const lift = await api.lift("y^2 - x", circle(1), 0);
    expect(lift.closes).toBe(false);
    expect(lift.closure_sheet).toBe(1);
    expect(transitions(lift.sheets)).toBe(1);
    const line = makePolyline("loop", 0);
    line.vertices = circle(1);
    line.lift = lift;
    expect(closureText(line)).toBe(
      "returns to start sheet: no (ends on sheet 1)",
    );
  });

  it("traversing it twice returns to the start sheet", async () => {
    const lift = await api.lift("y^2 - x", circle(2), 0);
    expect(lift.closes).toBe(true);
    expect(transitions(lift.sheets)).toBe(2);
    const line = makePolyline("loop", 0);
    line.vertices = circle(2);
    line.lift = lift;
    expect(closureText(line)).toBe("returns to start sheet: yes");
  });
});
