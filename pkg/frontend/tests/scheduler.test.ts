import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { RequestScheduler } from "../src/scheduler.js";

interface Deferred<T> {
  promise: Promise<T>;
  resolve: (value: T) => void;
  reject: (error: unknown) => void;
}

function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  let reject!: (error: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

describe("RequestScheduler", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("debounces a burst of edits into one request", async () => {
    const sent: number[] = [];
    const applied: Array<[number, number | null]> = [];
    const sched = new RequestScheduler<number, number>(
      async (q) => {
        sent.push(q);
        return q * 10;
      },
      (q, r) => applied.push([q, r]),
      150,
    );
    sched.schedule(1);
    await vi.advanceTimersByTimeAsync(100);
    sched.schedule(2);
    await vi.advanceTimersByTimeAsync(100);
    sched.schedule(3);
    expect(sent).toEqual([]); // still inside the debounce window
    await vi.advanceTimersByTimeAsync(150);
    expect(sent).toEqual([3]);
    expect(applied).toEqual([[3, 30]]);
  });

  it("drops a stale response that arrives after a newer one", async () => {
    const pending = new Map<number, Deferred<string>>();
    const applied: Array<[number, string | null]> = [];
    const sched = new RequestScheduler<number, string>(
      (q) => {
        const d = deferred<string>();
        pending.set(q, d);
        return d.promise;
      },
      (q, r) => applied.push([q, r]),
      150,
    );
    sched.schedule(1);
    await vi.advanceTimersByTimeAsync(150); // request 1 in flight
    sched.schedule(2);
    await vi.advanceTimersByTimeAsync(150); // request 2 in flight

    pending.get(2)!.resolve("two");
    await vi.advanceTimersByTimeAsync(0);
    expect(applied).toEqual([[2, "two"]]);

    pending.get(1)!.resolve("one"); // stale: a newer response already landed
    await vi.advanceTimersByTimeAsync(0);
    expect(applied).toEqual([[2, "two"]]);
  });

  it("applies in-order responses normally", async () => {
    const pending = new Map<number, Deferred<string>>();
    const applied: Array<[number, string | null]> = [];
    const sched = new RequestScheduler<number, string>(
      (q) => {
        const d = deferred<string>();
        pending.set(q, d);
        return d.promise;
      },
      (q, r) => applied.push([q, r]),
      150,
    );
    sched.schedule(1);
    await vi.advanceTimersByTimeAsync(150);
    pending.get(1)!.resolve("one");
    await vi.advanceTimersByTimeAsync(0);
    sched.schedule(2);
    await vi.advanceTimersByTimeAsync(150);
    pending.get(2)!.resolve("two");
    await vi.advanceTimersByTimeAsync(0);
    expect(applied).toEqual([
      [1, "one"],
      [2, "two"],
    ]);
  });

  it("hands a rejection to apply with a null result", async () => {
    const applied: Array<[number, string | null, unknown]> = [];
    const boom = new Error("service unreachable");
    const sched = new RequestScheduler<number, string>(
      () => Promise.reject(boom),
      (q, r, e) => applied.push([q, r, e]),
      150,
    );
    sched.schedule(7);
    await vi.advanceTimersByTimeAsync(150);
    expect(applied).toEqual([[7, null, boom]]);
  });

  it("flush skips the remaining debounce delay", async () => {
    const sent: number[] = [];
    const sched = new RequestScheduler<number, number>(
      async (q) => {
        sent.push(q);
        return q;
      },
      () => undefined,
      150,
    );
    sched.schedule(5);
    sched.flush();
    await vi.advanceTimersByTimeAsync(0);
    expect(sent).toEqual([5]);
    // the cancelled timer must not dispatch a second copy
    await vi.advanceTimersByTimeAsync(300);
    expect(sent).toEqual([5]);
  });

  it("cancel discards the pending request", async () => {
    const sent: number[] = [];
    const sched = new RequestScheduler<number, number>(
      async (q) => {
        sent.push(q);
        return q;
      },
      () => undefined,
      150,
    );
    sched.schedule(5);
    sched.cancel();
    await vi.advanceTimersByTimeAsync(500);
    expect(sent).toEqual([]);
  });
});
