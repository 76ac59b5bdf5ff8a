/** Typed client for the pattern service HTTP API. */

export interface BucketDoc {
  label: string;
  value: number;
}

export interface ParamDoc {
  path: string;
  kind: "boolean" | "integer" | "float" | "select";
  role: "topological" | "geometrical";
  default: unknown;
  range?: [number, number];
  options?: string[];
  descriptive_buckets?: BucketDoc[];
  description?: string;
}

export interface SchemaDoc {
  schema_version: string;
  params: ParamDoc[];
}

export type Assignments = Record<string, unknown>;

export interface ViolationDoc {
  path: string;
  reason: string;
  message: string;
}

export interface SessionView {
  id: string;
  config: { assignments: Assignments };
  stats: { num_panels: number; mean_edges_per_panel: number; num_stitches: number };
  validity: { passed: boolean; violations: { code: string; message: string }[] };
  history: Record<string, unknown>[];
  created: number;
  updated: number;
}

export interface EditResponse {
  applied: string;
  changed_paths: string[];
  notices: string[];
  session: SessionView;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details?: unknown;
}

export type ApiResult<T> =
  | { ok: true; body: T }
  | { ok: false; status: number; error: ApiErrorBody };

async function asResult<T>(resp: Response): Promise<ApiResult<T>> {
  if (resp.ok) {
    return { ok: true, body: (await resp.json()) as T };
  }
  let error: ApiErrorBody = { code: "HTTP_" + resp.status, message: resp.statusText };
  try {
    const body = (await resp.json()) as { error?: ApiErrorBody };
    if (body.error) error = body.error;
  } catch {
    /* non-JSON error body; keep the status fallback */
  }
  return { ok: false, status: resp.status, error };
}

export class Api {
  constructor(private readonly base: string = "") {}

  private url(path: string): string {
    return this.base + path;
  }

  async schema(): Promise<SchemaDoc> {
    const resp = await fetch(this.url("/schema"), { cache: "no-store" });
    if (!resp.ok) throw new Error(`schema fetch failed: ${resp.status}`);
    return (await resp.json()) as SchemaDoc;
  }

  async createSession(assignments?: Assignments): Promise<SessionView> {
    const body = assignments ? { config: { assignments } } : {};
    const resp = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) throw new Error(`session create failed: ${resp.status}`);
    return (await resp.json()) as SessionView;
  }

  async getSession(id: string): Promise<ApiResult<SessionView>> {
    return asResult(await fetch(this.url(`/sessions/${id}`), { cache: "no-store" }));
  }

  async patchConfig(id: string, updates: Assignments): Promise<ApiResult<SessionView>> {
    const resp = await fetch(this.url(`/sessions/${id}/config`), {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(updates),
    });
    return asResult(resp);
  }

  async postEdit(id: string, instruction: string): Promise<ApiResult<EditResponse>> {
    const resp = await fetch(this.url(`/sessions/${id}/edit`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ instruction }),
    });
    return asResult(resp);
  }

  /** Raw SVG bytes for the current pattern; the UI never draws geometry itself. */
  async getSvg(id: string): Promise<string> {
    const resp = await fetch(this.url(`/sessions/${id}/pattern.svg`), {
      cache: "no-store",
    });
    if (!resp.ok) throw new Error(`svg fetch failed: ${resp.status}`);
    return await resp.text();
  }
}
