import type { RecommendResponse, Verdict } from "./types.js";

/** Verdict badge: green for good, red for bad, gray while unknown. */
export function renderBadge(
  el: HTMLElement,
  verdict: Verdict,
  probability: number | null,
): void {
  el.classList.remove("badge-good", "badge-bad", "badge-unknown");
  el.classList.add(`badge-${verdict}`);
  if (verdict === "unknown") {
    el.textContent = "checking…";
  } else {
    const pct = probability === null ? "" : ` (${Math.round(probability * 100)}%)`;
    el.textContent = `${verdict} lighting${pct}`;
  }
}

export function renderCaptureButton(button: HTMLButtonElement, enabled: boolean): void {
  button.disabled = !enabled;
  button.title = enabled
    ? "Capture this frame"
    : "Capture unlocks once the lighting reads good";
}

export function rgbCss(rgb: number[]): string {
  return `rgb(${rgb[0]}, ${rgb[1]}, ${rgb[2]})`;
}

function distanceBand(distance: number): { label: string; css: string } {
  if (distance < 2) return { label: "very close", css: "band-very-close" };
  if (distance < 5) return { label: "similar", css: "band-similar" };
  return { label: "", css: "band-far" };
}

/**
 * Ranked shade list. The service already sorts ascending by distance; the
 * list renders in response order and flags the <2 and <5 bands.
 */
export function renderRecommendation(
  listEl: HTMLElement,
  toneEl: HTMLElement,
  response: RecommendResponse,
): void {
  toneEl.style.background = rgbCss(response.estimated_skin_tone.rgb);
  toneEl.title = `estimated skin tone ${rgbCss(response.estimated_skin_tone.rgb)}`;

  listEl.textContent = "";
  if (response.matches.length === 0) {
    const empty = document.createElement("p");
    empty.className = "no-match";
    empty.textContent = "No close match in the catalog.";
    listEl.appendChild(empty);
    return;
  }

  for (const match of response.matches) {
    const row = document.createElement("li");
    row.className = "shade-row";
    row.dataset.product = match.product_id;
    row.dataset.shade = match.shade_id;

    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = rgbCss(match.rgb);
    row.appendChild(swatch);

    const label = document.createElement("span");
    label.className = "shade-name";
    label.textContent = `${match.product_id} ${match.name}`;
    row.appendChild(label);

    const dist = document.createElement("span");
    dist.className = "shade-distance";
    dist.textContent = `ΔE ${match.distance.toFixed(1)}`;
    row.appendChild(dist);

    const band = distanceBand(match.distance);
    row.classList.add(band.css);
    if (band.label) {
      const flag = document.createElement("span");
      flag.className = "band-flag";
      flag.textContent = band.label;
      row.appendChild(flag);
    }
    listEl.appendChild(row);
  }
}

export function showMessage(el: HTMLElement, text: string): void {
  el.textContent = text;
  el.hidden = text === "";
}
