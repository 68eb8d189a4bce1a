// Typed client for the curation service HTTP API. The UI talks to the server
// exclusively through this module, so the documented endpoints are the only
// ones it can reach.

export interface TaxonomySubclass {
  id: string;
  name: string;
}

export interface TaxonomyClass {
  id: string;
  name: string;
  subclasses: TaxonomySubclass[];
}

export interface TaxonomyPayload {
  classes: TaxonomyClass[];
}

export interface FamilyHit {
  family: string;
  env_start: number;
  env_end: number;
  bit_score: number;
}

export interface Candidate {
  subclass: string;
  score: number;
}

export interface RegionUnit {
  index: number;
  start: number;
  end: number;
  template_id: string;
  rmsd: number;
  origin: string;
}

export interface Region {
  chain_id: string;
  classification: string;
  average_rmsd: number;
  rule_satisfied: string;
  relaxation_level: number;
  unit_count: number;
  units: RegionUnit[];
  files: string[];
  directory: string;
}

export interface ChainReport {
  chain_id: string;
  sequence_length: number;
  hits: FamilyHit[];
  candidates: Candidate[];
  used_fallback: boolean;
  selected_subclasses: string[];
  regions: Region[];
  relaxation_level_used: number | null;
  search_call_count: number;
}

export interface ResultBundle {
  structure_file: string;
  chains: Record<string, ChainReport>;
  artifact_paths: string[];
  exec_seconds: number;
  download_seconds: number;
  total_seconds: number;
}

export type RequestStatus = "QUEUED" | "RUNNING" | "DONE" | "FAILED";

export interface RequestPayload {
  id: string;
  status: RequestStatus;
  accession: string;
  accession_kind: string;
  mode: string;
  selected_subclasses: string[];
  submitted_at: number;
  finished_at: number | null;
  error: string | null;
  result?: ResultBundle;
  run_id?: string;
}

export interface ProteomeEntry {
  accession: string;
  source: "PDB" | "ALPHAFOLD";
  component: string;
  has_trr: boolean;
  region_count: number;
  exec_seconds: number;
  error: string | null;
  artifact_dir: string | null;
}

export interface ProteomeResultsPayload {
  run_id: string;
  proteome_id: string;
  entries: ProteomeEntry[];
}

export interface ProteomeStats {
  processed_total: number;
  processed_pdb: number;
  processed_alphafold: number;
  apt_all: number;
  structures_with_trr: number;
  apt_with_trr: number;
  apt_without_trr: number;
  apt_pdb_trr: number;
  apt_af_trr: number;
  avg_regions_per_trr_structure: number;
  apt_per_region: number;
  pdb_share_pct: number;
  alphafold_share_pct: number;
}

export interface ProteomeStatsPayload {
  run_id: string;
  proteome_id: string;
  stats: ProteomeStats | null;
  skipped_components: [string, string][];
}

export interface ApiErrorBody {
  code: string;
  message: string;
}

export class ApiException extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ApiErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

export interface ProteomeQuery {
  db?: "PDB" | "ALPHAFOLD";
  has_trr?: boolean;
  component?: string;
  order_by?: "exec_seconds" | "component" | "db";
  dir?: "asc" | "desc";
}

export function buildResultsQuery(query: ProteomeQuery): string {
  const params = new URLSearchParams();
  if (query.db !== undefined) params.set("db", query.db);
  if (query.has_trr !== undefined) params.set("has_trr", String(query.has_trr));
  if (query.component !== undefined) params.set("component", query.component);
  if (query.order_by !== undefined) params.set("order_by", query.order_by);
  if (query.dir !== undefined) params.set("dir", query.dir);
  const encoded = params.toString();
  return encoded ? `?${encoded}` : "";
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class DaisyClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    if (!response.ok) {
      let body: ApiErrorBody;
      try {
        body = (await response.json()) as ApiErrorBody;
      } catch {
        body = { code: "HttpError", message: `${response.status}` };
      }
      throw new ApiException(response.status, body);
    }
    return (await response.json()) as T;
  }

  getTaxonomy(): Promise<TaxonomyPayload> {
    return this.request("/api/taxonomy");
  }

  submitRequest(body: {
    accession: string;
    email: string;
    mode: string;
    subclasses?: string[];
  }): Promise<{ id: string }> {
    return this.request("/api/requests", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getRequest(token: string): Promise<RequestPayload> {
    return this.request(`/api/requests/${encodeURIComponent(token)}`);
  }

  submitProteome(proteomeId: string, email = "batch@local"): Promise<{ run_id: string }> {
    return this.request("/api/proteomes", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ proteome_id: proteomeId, email }),
    });
  }

  getProteomeResults(runId: string, query: ProteomeQuery = {}): Promise<ProteomeResultsPayload> {
    return this.request(
      `/api/proteomes/${encodeURIComponent(runId)}/results${buildResultsQuery(query)}`,
    );
  }

  getProteomeStats(runId: string): Promise<ProteomeStatsPayload> {
    return this.request(`/api/proteomes/${encodeURIComponent(runId)}/stats`);
  }

  outputUrl(token: string, path: string): string {
    return `${this.base}/api/requests/${encodeURIComponent(token)}/outputs/${path}`;
  }

  async fetchOutputText(token: string, path: string): Promise<string> {
    const response = await this.fetchImpl(this.outputUrl(token, path));
    if (!response.ok) {
      throw new ApiException(response.status, {
        code: "HttpError",
        message: `${response.status}`,
      });
    }
    return response.text();
  }
}
