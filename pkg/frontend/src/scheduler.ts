// Debounced request dispatch with monotone sequence numbers.  Edits arrive
// faster than the service can answer; every dispatched request gets a
// ticket, and a response is applied only if no response with a newer
// ticket has been applied yet.  Stale answers are dropped, so whatever is
// rendered always came from the latest applied response.

export type SendFn<Q, R> = (request: Q) => Promise<R>;
export type ApplyFn<Q, R> = (
  request: Q,
  result: R | null,
  error: unknown,
) => void;

export const DEBOUNCE_MS = 150;

export class RequestScheduler<Q, R> {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private pending: Q | null = null;
  private issued = 0;
  private applied = 0;

  constructor(
    private readonly send: SendFn<Q, R>,
    private readonly apply: ApplyFn<Q, R>,
    private readonly delayMs: number = DEBOUNCE_MS,
  ) {}

  // replaces any not-yet-dispatched request and restarts the debounce timer
  schedule(request: Q): void {
    this.pending = request;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.dispatch();
    }, this.delayMs);
  }

  // dispatch immediately, skipping the remaining debounce delay
  flush(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.dispatch();
  }

  cancel(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.pending = null;
  }

  private dispatch(): void {
    if (this.pending === null) return;
    const request = this.pending;
    this.pending = null;
    const ticket = ++this.issued;
    this.send(request).then(
      (result) => this.settle(ticket, request, result, null),
      (error) => this.settle(ticket, request, null, error),
    );
  }

  private settle(
    ticket: number,
    request: Q,
    result: R | null,
    error: unknown,
  ): void {
    if (ticket <= this.applied) return; // a newer response already landed
    this.applied = ticket;
    this.apply(request, result, error);
  }
}
