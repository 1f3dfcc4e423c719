import type { ServiceClient } from "./types.js";
import type { GuidanceStore } from "./state.js";

export interface FrameSource {
  /** Latest webcam frame as a PNG blob, or null when unavailable. */
  nextFrame(): Promise<Blob | null>;
}

export interface LoopOptions {
  intervalMs?: number;
}

const DEFAULT_INTERVAL_MS = 500;

/**
 * Live assessment loop: every interval, grab a frame and POST it to
 * /v1/assess, pushing the verdict into the store.
 *
 * Rules enforced here:
 *  - frames are only uploaded while the store is in the streaming phase;
 *  - at most one request is in flight - a newer frame aborts the older call;
 *  - responses carry a sequence number, so a stale response can never
 *    overwrite a newer verdict;
 *  - transport errors surface as the "unknown" verdict and polling goes on.
 */
export class AssessmentLoop {
  private timer: ReturnType<typeof setInterval> | null = null;
  private controller: AbortController | null = null;
  private sendSeq = 0;
  private appliedSeq = 0;

  constructor(
    private readonly client: ServiceClient,
    private readonly store: GuidanceStore,
    private readonly frames: FrameSource,
    options: LoopOptions = {},
  ) {
    this.intervalMs = options.intervalMs ?? DEFAULT_INTERVAL_MS;
  }

  readonly intervalMs: number;

  start(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => void this.tick(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
    this.controller?.abort();
    this.controller = null;
  }

  get running(): boolean {
    return this.timer !== null;
  }

  async tick(): Promise<void> {
    if (this.store.get().phase !== "streaming") return;
    const frame = await this.frames.nextFrame();
    if (frame === null) return;

    // a newer frame supersedes whatever is still in flight
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const seq = ++this.sendSeq;

    try {
      const response = await this.client.assess(frame, controller.signal);
      if (seq > this.appliedSeq) {
        this.appliedSeq = seq;
        this.store.reportVerdict(response.label, response.probability);
      }
    } catch (err) {
      if (controller.signal.aborted) return; // superseded, not an error
      if (seq > this.appliedSeq) {
        this.appliedSeq = seq;
        this.store.reportVerdict("unknown", null);
      }
    } finally {
      if (this.controller === controller) this.controller = null;
    }
  }
}
