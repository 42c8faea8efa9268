import type {
  BasisCheckPayload,
  CNum,
  CurvePayload,
  CycleFile,
  DifferentialText,
  IntersectPayload,
  KleinReferencePayload,
  LiftPayload,
  PeriodsPayload,
  TransformPayload,
} from "./types.js";

export const DEFAULT_BASE_URL = "http://127.0.0.1:8642";

// Non-2xx answers from the service.  400 carries {reason}; 422 carries
// {reason, segment} where segment is the offending polyline edge or null.
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly reason: string,
    readonly segment: number | null = null,
  ) {
    super(reason);
    this.name = "ApiError";
  }
}

export function isApiError(err: unknown): err is ApiError {
  return err instanceof ApiError;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string = DEFAULT_BASE_URL,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  curve(spec: {
    curve: string;
    basepoint?: CNum;
    labels?: CNum[];
  }): Promise<CurvePayload> {
    return this.post("/api/curve", spec);
  }

  lift(
    curve: string,
    points: CNum[],
    startSheet: number,
  ): Promise<LiftPayload> {
    return this.post("/api/lift", {
      curve,
      points,
      start_sheet: startSheet,
    });
  }

  intersect(
    cycles: CycleFile,
    pair: [string, string],
  ): Promise<IntersectPayload> {
    return this.post("/api/intersect", { cycles, pair });
  }

  basisCheck(set: CycleFile | string): Promise<BasisCheckPayload> {
    return this.post("/api/basis-check", { set });
  }

  transform(
    src: CycleFile | string,
    dst: CycleFile | string,
  ): Promise<TransformPayload> {
    return this.post("/api/transform", { src, dst });
  }

  periods(
    cycles: CycleFile | string,
    options: { differentials?: DifferentialText[]; tol?: number } = {},
  ): Promise<PeriodsPayload> {
    const body: Record<string, unknown> = { cycles };
    if (options.differentials !== undefined) {
      body.differentials = options.differentials;
    }
    if (options.tol !== undefined) body.tol = options.tol;
    return this.post("/api/periods", body);
  }

  async kleinReference(): Promise<KleinReferencePayload> {
    const response = await this.fetchFn(this.baseUrl + "/api/klein/reference");
    return this.unwrap(response);
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return this.unwrap<T>(response);
  }

  private async unwrap<T>(response: Response): Promise<T> {
    if (response.ok) {
      return (await response.json()) as T;
    }
    let reason = `service answered ${response.status}`;
    let segment: number | null = null;
    try {
      const payload = await response.json();
      if (typeof payload.reason === "string") reason = payload.reason;
      if (typeof payload.segment === "number") segment = payload.segment;
    } catch {
      // error body was not JSON; keep the status line
    }
    throw new ApiError(response.status, reason, segment);
  }
}
