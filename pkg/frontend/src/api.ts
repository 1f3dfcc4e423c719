import type {
  AssessResponse,
  CatalogShade,
  RecommendResponse,
  ServiceClient,
} from "./types.js";

/** HTTP client for the lumishade service. Frames travel as raw PNG bodies. */
export class HttpServiceClient implements ServiceClient {
  constructor(private readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async assess(frame: Blob, signal?: AbortSignal): Promise<AssessResponse> {
    const resp = await fetch(this.url("/v1/assess"), {
      method: "POST",
      body: frame,
      headers: { "content-type": "image/png" },
      signal: signal ?? null,
    });
    if (!resp.ok) throw new Error(`assess failed: HTTP ${resp.status}`);
    return (await resp.json()) as AssessResponse;
  }

  async recommend(frame: Blob): Promise<RecommendResponse> {
    const resp = await fetch(this.url("/v1/recommend"), {
      method: "POST",
      body: frame,
      headers: { "content-type": "image/png" },
    });
    if (!resp.ok) throw new Error(`recommend failed: HTTP ${resp.status}`);
    return (await resp.json()) as RecommendResponse;
  }

  async catalog(): Promise<{ shades: CatalogShade[] }> {
    const resp = await fetch(this.url("/v1/catalog"));
    if (!resp.ok) throw new Error(`catalog failed: HTTP ${resp.status}`);
    return (await resp.json()) as { shades: CatalogShade[] };
  }
}
