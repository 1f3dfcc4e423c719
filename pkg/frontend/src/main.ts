import { HttpServiceClient } from "./api.js";
import { CameraSource } from "./camera.js";
import { AssessmentLoop } from "./loop.js";
import { GuidanceStore } from "./state.js";
import { StubServiceClient } from "./stub.js";
import type { FrameSource } from "./loop.js";
import type { ServiceClient } from "./types.js";
import {
  renderBadge,
  renderCaptureButton,
  renderRecommendation,
  showMessage,
} from "./ui.js";

const params = new URLSearchParams(window.location.search);
const BASE_URL = params.get("service") ?? "http://127.0.0.1:8080";
const USE_STUB = params.get("stub") === "1";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const video = el<HTMLVideoElement>("preview");
const badge = el<HTMLElement>("badge");
const message = el<HTMLElement>("message");
const startButton = el<HTMLButtonElement>("start");
const captureButton = el<HTMLButtonElement>("capture");
const retakeButton = el<HTMLButtonElement>("retake");
const recommendRetry = el<HTMLButtonElement>("retry");
const shadeList = el<HTMLElement>("shades");
const toneSwatch = el<HTMLElement>("tone");

const store = new GuidanceStore();
const client: ServiceClient = USE_STUB ? makeDemoStub() : new HttpServiceClient(BASE_URL);

let frames: FrameSource & { open?: () => Promise<void>; close?: () => void };
if (USE_STUB) {
  // a gray placeholder frame; no camera needed to demo against the stub
  frames = {
    nextFrame: async () => new Blob([new Uint8Array(16)], { type: "image/png" }),
  };
} else {
  frames = new CameraSource(video);
}

const loop = new AssessmentLoop(client, store, frames);

store.subscribe((state) => {
  renderBadge(badge, state.lastVerdict, state.lastProbability);
  renderCaptureButton(captureButton, store.canCapture());
  retakeButton.hidden = state.phase === "idle" || state.phase === "streaming";
  recommendRetry.hidden = true;
  if (state.phase === "captured") {
    showMessage(message, "Frame captured, fetching recommendations…");
  }
});

startButton.addEventListener("click", async () => {
  startButton.disabled = true;
  try {
    if (frames.open) await frames.open();
  } catch {
    showMessage(
      message,
      "Camera access was denied. Allow camera use in the browser and reload.",
    );
    startButton.disabled = false;
    return;
  }
  showMessage(message, "");
  store.startStreaming();
  loop.start();
});

captureButton.addEventListener("click", async () => {
  if (!store.canCapture()) {
    showMessage(message, "Hold on: wait for the badge to turn good, then capture.");
    return;
  }
  const frame = await frames.nextFrame();
  if (frame === null || !store.capture(frame)) {
    showMessage(message, "Could not grab a frame; try again.");
    return;
  }
  await fetchRecommendation();
});

async function fetchRecommendation(): Promise<void> {
  const frame = store.get().capturedFrame;
  if (frame === null) return;
  try {
    const response = await client.recommend(frame);
    renderRecommendation(shadeList, toneSwatch, response);
    store.showRecommendation();
    showMessage(message, "");
  } catch {
    // keep the captured state so retry can resubmit the same frame
    showMessage(message, "Recommendation request failed.");
    recommendRetry.hidden = false;
  }
}

recommendRetry.addEventListener("click", () => void fetchRecommendation());

retakeButton.addEventListener("click", () => {
  shadeList.textContent = "";
  showMessage(message, "");
  store.reset();
});

function makeDemoStub(): StubServiceClient {
  const stub = new StubServiceClient();
  stub.latencyMs = 80;
  // flip the verdict periodically so the badge and gating are visible
  let good = false;
  setInterval(() => {
    good = !good;
    stub.setVerdict(good ? "good" : "bad", good ? 0.93 : 0.22);
  }, 4000);
  return stub;
}
