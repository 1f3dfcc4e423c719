/** Wire types for the lumishade service plus the UI's own state. */

export type Verdict = "good" | "bad" | "unknown";

export type Phase = "idle" | "streaming" | "captured" | "recommended";

export interface AssessResponse {
  label: "good" | "bad";
  probability: number;
}

export interface LabValue {
  l: number;
  a: number;
  b: number;
}

export interface ShadeMatch {
  product_id: string;
  shade_id: string;
  name: string;
  rgb: number[];
  lab: LabValue;
  distance: number;
  within_2: boolean;
  within_5: boolean;
}

export interface RecommendResponse {
  estimated_skin_tone: { rgb: number[]; lab: LabValue };
  illumination: AssessResponse | null;
  threshold: number;
  matches: ShadeMatch[];
}

export interface CatalogShade {
  product_id: string;
  shade_id: string;
  name: string;
  rgb: number[];
}

/** The service surface the UI consumes; the stub implements it too. */
export interface ServiceClient {
  assess(frame: Blob, signal?: AbortSignal): Promise<AssessResponse>;
  recommend(frame: Blob): Promise<RecommendResponse>;
  catalog(): Promise<{ shades: CatalogShade[] }>;
}

export interface GuidanceState {
  phase: Phase;
  lastVerdict: Verdict;
  lastProbability: number | null;
  capturedFrame: Blob | null;
}
