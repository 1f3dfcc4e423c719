import type { FrameSource } from "./loop.js";

export const UPLOAD_SIZE = 512; // frames are downscaled client-side

/** Webcam wrapper that grabs square, downscaled PNG frames for upload. */
export class CameraSource implements FrameSource {
  private video: HTMLVideoElement;
  private canvas: HTMLCanvasElement;
  private stream: MediaStream | null = null;

  constructor(video: HTMLVideoElement) {
    this.video = video;
    this.canvas = document.createElement("canvas");
    this.canvas.width = UPLOAD_SIZE;
    this.canvas.height = UPLOAD_SIZE;
  }

  /** Throws when the user denies camera access. */
  async open(): Promise<void> {
    this.stream = await navigator.mediaDevices.getUserMedia({
      video: { width: { ideal: 1280 }, height: { ideal: 720 } },
      audio: false,
    });
    this.video.srcObject = this.stream;
    await this.video.play();
  }

  close(): void {
    this.stream?.getTracks().forEach((track) => track.stop());
    this.stream = null;
    this.video.srcObject = null;
  }

  async nextFrame(): Promise<Blob | null> {
    if (!this.stream || this.video.videoWidth === 0) return null;
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return null;
    // center-crop to a square, then downscale
    const side = Math.min(this.video.videoWidth, this.video.videoHeight);
    const sx = (this.video.videoWidth - side) / 2;
    const sy = (this.video.videoHeight - side) / 2;
    ctx.drawImage(this.video, sx, sy, side, side, 0, 0, UPLOAD_SIZE, UPLOAD_SIZE);
    return new Promise((resolve) =>
      this.canvas.toBlob((blob) => resolve(blob), "image/png"),
    );
  }
}
