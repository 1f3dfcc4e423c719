import type {
  AssessResponse,
  CatalogShade,
  RecommendResponse,
  ServiceClient,
  ShadeMatch,
} from "./types.js";

/**
 * In-memory stand-in for the real service: the demo page runs against it
 * with ?stub=1 and the tests drive it directly. Verdict and matches are
 * settable; latency is simulated so abort/ordering logic gets exercised.
 */
export class StubServiceClient implements ServiceClient {
  verdict: "good" | "bad" = "bad";
  probability = 0.3;
  latencyMs = 0;
  failNextAssess = false;
  failNextRecommend = false;
  assessCalls = 0;

  matches: ShadeMatch[] = [
    stubMatch("PA", "s2", "honey", [182, 132, 102], 1.2),
    stubMatch("PA", "s1", "sand", [205, 160, 128], 3.4),
    stubMatch("PB", "s1", "cocoa", [120, 78, 56], 8.9),
  ];

  setVerdict(verdict: "good" | "bad", probability: number): void {
    this.verdict = verdict;
    this.probability = probability;
  }

  private delay(signal?: AbortSignal): Promise<void> {
    if (this.latencyMs <= 0) return Promise.resolve();
    return new Promise((resolve, reject) => {
      const id = setTimeout(resolve, this.latencyMs);
      signal?.addEventListener("abort", () => {
        clearTimeout(id);
        reject(new DOMException("aborted", "AbortError"));
      });
    });
  }

  async assess(_frame: Blob, signal?: AbortSignal): Promise<AssessResponse> {
    this.assessCalls += 1;
    await this.delay(signal);
    if (this.failNextAssess) {
      this.failNextAssess = false;
      throw new Error("stubbed transport failure");
    }
    return { label: this.verdict, probability: this.probability };
  }

  async recommend(_frame: Blob): Promise<RecommendResponse> {
    await this.delay();
    if (this.failNextRecommend) {
      this.failNextRecommend = false;
      throw new Error("stubbed transport failure");
    }
    return {
      estimated_skin_tone: { rgb: [188, 140, 110], lab: { l: 62.6, a: 13.5, b: 22.9 } },
      illumination: { label: this.verdict, probability: this.probability },
      threshold: 5,
      matches: [...this.matches],
    };
  }

  async catalog(): Promise<{ shades: CatalogShade[] }> {
    return {
      shades: this.matches.map((m) => ({
        product_id: m.product_id,
        shade_id: m.shade_id,
        name: m.name,
        rgb: m.rgb,
      })),
    };
  }
}

export function stubMatch(
  product: string,
  shadeId: string,
  name: string,
  rgb: number[],
  distance: number,
): ShadeMatch {
  return {
    product_id: product,
    shade_id: shadeId,
    name,
    rgb,
    lab: { l: 50, a: 10, b: 20 },
    distance,
    within_2: distance < 2,
    within_5: distance < 5,
  };
}
