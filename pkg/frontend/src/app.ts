/** DOM wiring: camera loop, result view, gallery and comparison. */

import {
  CaptureSummary,
  ClassifyResponse,
  captureImageUrl,
  classify,
  compareCaptures,
  listCaptures,
  tagCapture,
} from "./api.js";
import { formatPercent, renderOverlay } from "./overlay.js";
import {
  ViewState,
  activeGrid,
  initialState,
  setAlpha,
  setThreshold,
  toggleResult,
  withResult,
} from "./state.js";

const MAX_LONG_EDGE = 1024;
const TAGS = ["impressive", "funny", "puzzling"];

let state: ViewState = initialState();
let snapshot: HTMLCanvasElement | null = null; // last captured frame, full size
let inFlight = false;

const $ = (id: string) => document.getElementById(id)!;

function show(mode: ViewState["mode"]): void {
  state = { ...state, mode };
  for (const m of ["camera", "result", "gallery", "compare"]) {
    $(`view-${m}`).classList.toggle("hidden", m !== mode);
  }
}

// ---- camera -------------------------------------------------------------

async function startCamera(): Promise<void> {
  const video = $("camera-video") as HTMLVideoElement;
  try {
    const stream = await navigator.mediaDevices.getUserMedia({
      video: { facingMode: "environment" },
    });
    video.srcObject = stream;
    await video.play();
    $("camera-denied").classList.add("hidden");
  } catch {
    $("camera-denied").classList.remove("hidden");
  }
}

function grabFrame(video: HTMLVideoElement): HTMLCanvasElement {
  const scale = Math.min(1, MAX_LONG_EDGE / Math.max(video.videoWidth, video.videoHeight));
  const canvas = document.createElement("canvas");
  canvas.width = Math.max(1, Math.round(video.videoWidth * scale));
  canvas.height = Math.max(1, Math.round(video.videoHeight * scale));
  canvas.getContext("2d")!.drawImage(video, 0, 0, canvas.width, canvas.height);
  return canvas;
}

async function captureAndClassify(): Promise<void> {
  if (inFlight) return;
  const video = $("camera-video") as HTMLVideoElement;
  if (!video.videoWidth) return;
  inFlight = true;
  ($("shutter") as HTMLButtonElement).disabled = true;
  $("net-error").classList.add("hidden");
  try {
    snapshot = grabFrame(video);
    const blob = await new Promise<Blob>((resolve, reject) =>
      snapshot!.toBlob((b) => (b ? resolve(b) : reject(new Error("encode failed"))), "image/png"),
    );
    const response = await classify(blob);
    state = withResult(state, response);
    show("result");
    renderResultView();
  } catch {
    $("net-error").classList.remove("hidden");
  } finally {
    inFlight = false;
    ($("shutter") as HTMLButtonElement).disabled = false;
  }
}

// ---- result view --------------------------------------------------------

function renderResultView(): void {
  const resp = state.response;
  if (!resp || !snapshot) return;
  const tabs = $("result-tabs");
  tabs.innerHTML = "";
  resp.predictions.forEach((pred, i) => {
    const btn = document.createElement("button");
    btn.className = "tab" + (i === state.activeResult ? " active" : "");
    btn.textContent = `${pred.label} ${formatPercent(pred.probability)}`;
    btn.addEventListener("click", () => {
      state = toggleResult(state, i);
      renderResultView(); // cached grids only; no network call
    });
    tabs.appendChild(btn);
  });
  ($("threshold-slider") as HTMLInputElement).value = String(state.threshold);
  ($("alpha-slider") as HTMLInputElement).value = String(state.alpha);
  drawOverlay();
}

function drawOverlay(): void {
  const grid = activeGrid(state);
  if (!grid || !snapshot) return;
  const canvas = $("result-canvas") as HTMLCanvasElement;
  canvas.width = snapshot.width;
  canvas.height = snapshot.height;
  const ctx = canvas.getContext("2d")!;
  ctx.drawImage(snapshot, 0, 0);
  const image = ctx.getImageData(0, 0, canvas.width, canvas.height);
  renderOverlay(image.data, canvas.width, canvas.height, grid, state.threshold, state.alpha);
  ctx.putImageData(image, 0, 0);
}

async function applyTag(tag: string): Promise<void> {
  if (!state.captureId) return;
  const note = ($("tag-note") as HTMLInputElement).value;
  try {
    await tagCapture(state.captureId, tag, note);
    $("tag-saved").textContent = `saved as ${tag}`;
  } catch {
    $("tag-saved").textContent = "tagging failed";
  }
}

// ---- gallery ------------------------------------------------------------

async function renderGallery(): Promise<void> {
  const filter = ($("gallery-filter") as HTMLSelectElement).value;
  let captures: CaptureSummary[] = [];
  try {
    captures = await listCaptures(filter || undefined);
  } catch {
    $("gallery-list").textContent = "could not load captures";
    return;
  }
  const list = $("gallery-list");
  list.innerHTML = "";
  for (const cap of captures) {
    const card = document.createElement("div");
    card.className = "card";
    const img = document.createElement("img");
    img.src = captureImageUrl(cap.id);
    img.alt = cap.top_label;
    const caption = document.createElement("div");
    caption.textContent = `${cap.top_label} ${formatPercent(cap.top_probability)}` +
      (cap.tag !== "none" ? ` [${cap.tag}]` : "");
    const pick = document.createElement("button");
    pick.textContent = "compare";
    pick.addEventListener("click", () => addToComparison(cap.id));
    card.append(img, caption, pick);
    list.appendChild(card);
  }
}

// ---- compare ------------------------------------------------------------

const comparisonPicks: string[] = [];

function addToComparison(id: string): void {
  comparisonPicks.push(id);
  if (comparisonPicks.length > 2) comparisonPicks.shift();
  $("compare-status").textContent = `selected: ${comparisonPicks.join(" vs ")}`;
  if (comparisonPicks.length === 2) {
    show("compare");
    void renderComparison(comparisonPicks[0], comparisonPicks[1]);
  }
}

async function renderComparison(a: string, b: string): Promise<void> {
  const classIndex = parseInt(($("compare-class") as HTMLInputElement).value, 10) || 0;
  try {
    const report = await compareCaptures(a, b, classIndex);
    ($("compare-img-a") as HTMLImageElement).src = captureImageUrl(a);
    ($("compare-img-b") as HTMLImageElement).src = captureImageUrl(b);
    const rows = report.class_deltas
      .map(
        (d) =>
          `<tr><td>${d.label}</td><td>${formatPercent(d.probability_a)}</td>` +
          `<td>${formatPercent(d.probability_b)}</td>` +
          `<td>${(d.delta >= 0 ? "+" : "") + formatPercent(Math.abs(d.delta))}</td></tr>`,
      )
      .join("");
    $("compare-table").innerHTML =
      `<tr><th>class</th><th>A</th><th>B</th><th>delta</th></tr>${rows}`;
    const changes = report.rank_changes
      .map((r) => `${r.label}: ${r.rank_a ?? "-"} -> ${r.rank_b ?? "-"}`)
      .join(", ");
    $("compare-ranks").textContent = changes || "no rank changes";
  } catch {
    $("compare-ranks").textContent = "comparison failed";
  }
}

// ---- boot ---------------------------------------------------------------

export function boot(): void {
  $("shutter").addEventListener("click", () => void captureAndClassify());
  $("threshold-slider").addEventListener("input", (e) => {
    state = setThreshold(state, parseFloat((e.target as HTMLInputElement).value));
    drawOverlay();
  });
  $("alpha-slider").addEventListener("input", (e) => {
    state = setAlpha(state, parseFloat((e.target as HTMLInputElement).value));
    drawOverlay();
  });
  $("back-to-camera").addEventListener("click", () => show("camera"));
  $("open-gallery").addEventListener("click", () => {
    show("gallery");
    void renderGallery();
  });
  $("gallery-filter").addEventListener("change", () => void renderGallery());
  $("gallery-back").addEventListener("click", () => show("camera"));
  $("compare-back").addEventListener("click", () => show("gallery"));
  $("info-button").addEventListener("click", () => $("info-overlay").classList.toggle("hidden"));
  $("info-close").addEventListener("click", () => $("info-overlay").classList.add("hidden"));
  for (const tag of TAGS) {
    $(`tag-${tag}`).addEventListener("click", () => void applyTag(tag));
  }
  show("camera");
  void startCamera();
}

if (typeof document !== "undefined" && document.getElementById("shutter")) {
  boot();
}
