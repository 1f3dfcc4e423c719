import type { GuidanceState, Verdict } from "./types.js";

type Listener = (state: GuidanceState) => void;

/**
 * Guidance state machine.
 *
 * Phases move idle -> streaming -> captured -> recommended, with reset back
 * to streaming. Capture is permitted only while streaming with a good last
 * verdict; everything else is rejected rather than thrown so the UI can show
 * guidance text instead of crashing.
 */
export class GuidanceStore {
  private state: GuidanceState = {
    phase: "idle",
    lastVerdict: "unknown",
    lastProbability: null,
    capturedFrame: null,
  };
  private listeners: Listener[] = [];

  get(): GuidanceState {
    return { ...this.state };
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(partial: Partial<GuidanceState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.get());
  }

  startStreaming(): void {
    if (this.state.phase === "idle") {
      this.update({ phase: "streaming" });
    }
  }

  /** Record a completed assessment; ignored outside the streaming phase. */
  reportVerdict(verdict: Verdict, probability: number | null): void {
    if (this.state.phase !== "streaming") return;
    this.update({ lastVerdict: verdict, lastProbability: probability });
  }

  canCapture(): boolean {
    return this.state.phase === "streaming" && this.state.lastVerdict === "good";
  }

  /** Freeze a frame for recommendation. Returns false when capture is blocked. */
  capture(frame: Blob): boolean {
    if (!this.canCapture()) return false;
    this.update({ phase: "captured", capturedFrame: frame });
    return true;
  }

  showRecommendation(): void {
    if (this.state.phase === "captured") {
      this.update({ phase: "recommended" });
    }
  }

  /** Back to the live loop; drops the captured frame. */
  reset(): void {
    if (this.state.phase === "captured" || this.state.phase === "recommended") {
      this.update({ phase: "streaming", capturedFrame: null });
    }
  }
}
